//! Correctness runs: generate keys, encrypt random messages, bootstrap, and
//! compare decryptions against the plaintext table.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use mmpm_core::bootstrap::{boot_general_with, bootstrap, keygen, EvaluationKeySet, LookUpTable, Rotation, SecretKeySet};
use mmpm_core::noise::var_bootstrap_output;
use mmpm_core::ring::count_ring_muls;
use mmpm_core::sampling::DiscreteGaussian;

use crate::error::{BenchError, Result};
use crate::keysize::{key_size_report, KeySizeReport};
use crate::presets::{ParameterPreset, Scheme};

/// What to evaluate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionSpec {
    /// `f(x) = x` on `Z_t`, through the two-round procedure.
    Identity,
    /// `1` on `[0, t/2)`, `-1` on `[t/2, t)`: nega-cyclic, one round.
    Sign,
    /// A user table; one round if nega-cyclic, two otherwise.
    Table(LookUpTable),
}

impl FunctionSpec {
    /// `identity`, `sign` or `table:<file>`.
    pub fn parse(spec: &str, t: u64, t_prime: u64) -> Result<Self> {
        match spec {
            "identity" => Ok(Self::Identity),
            "sign" => Ok(Self::Sign),
            _ => match spec.strip_prefix("table:") {
                Some(path) => Ok(Self::Table(read_table(Path::new(path), t, t_prime)?)),
                None => Err(BenchError::Preset(format!("unknown function {spec:?}"))),
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Sign => "sign",
            Self::Table(_) => "table",
        }
    }

    /// The table evaluated and whether the input carries an extra top bit.
    fn resolve(&self, t: u64, t_prime: u64) -> Result<(LookUpTable, bool)> {
        Ok(match self {
            Self::Identity => (LookUpTable::identity(t)?, true),
            Self::Sign => (LookUpTable::from_fn(t, t_prime, |m| if m < t / 2 { 1 } else { -1 })?, false),
            Self::Table(f) => {
                if f.t() != t {
                    return Err(BenchError::Table(format!("table has {} inputs, preset has t = {t}", f.t())));
                }
                (f.clone(), !f.is_nega_cyclic())
            }
        })
    }
}

/// Parses `input output` pairs, one per line, decimal; `#` starts a comment.
/// Every input in `[0, t)` must appear exactly once; outputs are reduced mod
/// `t'`.
pub fn parse_table(text: &str, t: u64, t_prime: u64) -> Result<LookUpTable> {
    let mut values: Vec<Option<u64>> = vec![None; t as usize];
    for (line_no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || BenchError::Table(format!("line {}: expected `input output`, got {line:?}", line_no + 1));
        let mut words = line.split_whitespace();
        let (Some(x), Some(y), None) = (words.next(), words.next(), words.next()) else {
            return Err(bad());
        };
        let x: u64 = x.parse().map_err(|_| bad())?;
        let y: i64 = y.parse().map_err(|_| bad())?;
        let slot = values
            .get_mut(x as usize)
            .ok_or_else(|| BenchError::Table(format!("line {}: input {x} outside [0, {t})", line_no + 1)))?;
        if slot.replace(y.rem_euclid(t_prime as i64) as u64).is_some() {
            return Err(BenchError::Table(format!("line {}: input {x} listed twice", line_no + 1)));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| BenchError::Table(format!("input {x} missing"))))
        .collect::<Result<_>>()?;
    Ok(LookUpTable::new(values, t_prime)?)
}

pub fn read_table(path: &Path, t: u64, t_prime: u64) -> Result<LookUpTable> {
    parse_table(&std::fs::read_to_string(path)?, t, t_prime)
}

/// The result of one encrypted evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub message: u64,
    pub expected: u64,
    pub decrypted: u64,
    /// Output phase minus `expected·⌊q/t'⌋`, centered.
    pub error: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub preset: String,
    pub scheme: Scheme,
    pub function: String,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    /// Bootstraps per evaluated function (1 or 2).
    pub rounds: u64,
    pub mean_abs_error: f64,
    pub max_abs_error: u64,
    /// Predicted variance proxy of the output error, at the actual `‖s‖²`.
    pub predicted_proxy: f64,
    /// Ring multiplications per evaluated function.
    pub ring_mults: u64,
    pub key_sizes: KeySizeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds_per_bootstrap: Option<f64>,
}

/// Key generation and message draws use independent streams of one seed, so
/// presets with the same `(n, q, t)` see identical messages.
fn keys_for(preset: &ParameterPreset, seed: u64) -> Result<(SecretKeySet, EvaluationKeySet)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(keygen(&preset.params, &mut rng)?)
}

fn trial_rngs(seed: u64, trial: u64) -> (ChaCha20Rng, ChaCha20Rng) {
    let mut message = ChaCha20Rng::seed_from_u64(seed);
    message.set_stream(2 * trial + 1);
    let mut noise = ChaCha20Rng::seed_from_u64(seed);
    noise.set_stream(2 * trial + 2);
    (message, noise)
}

/// Runs `trials` evaluations and returns the aggregate and per-trial outcomes.
pub fn run_experiment_detailed(
    preset: &ParameterPreset,
    function: &FunctionSpec,
    trials: u64,
    seed: u64,
    timing: bool,
) -> Result<(RunReport, Vec<TrialOutcome>)> {
    preset.validate()?;
    let p = &preset.params;
    let (f, two_round) = function.resolve(p.t, p.t_prime)?;
    let rotation = match preset.scheme {
        Scheme::Mmpm => Rotation::Mmpm,
        Scheme::Tfhe => Rotation::Tfhe,
    };
    let (sk, keys) = if trials == 0 {
        (None, None)
    } else {
        let (sk, keys) = keys_for(preset, seed)?;
        (Some(sk), Some(keys))
    };
    let start = Instant::now();
    let results: Vec<(TrialOutcome, u64)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (sk, keys) = (sk.as_ref().expect("keys"), keys.as_ref().expect("keys"));
            let (mut msg_rng, mut rng) = trial_rngs(seed, trial);
            let noise = DiscreteGaussian::new(p.sigma_enc);
            let (message, ct) = if two_round {
                let m = msg_rng.gen_range(0..2 * p.t);
                (m, sk.lwe.encrypt(m, 2 * p.t, p.q, &noise, &mut rng)?)
            } else {
                let m = msg_rng.gen_range(0..p.t);
                (m, sk.lwe.encrypt(m, p.t, p.q, &noise, &mut rng)?)
            };
            let (out, muls) = count_ring_muls(|| {
                if two_round {
                    boot_general_with(&ct, &f, keys, rotation)
                } else {
                    bootstrap(&ct, &f, keys, rotation)
                }
            });
            let out = out?;
            let expected = f.eval(message);
            let outcome = TrialOutcome {
                message,
                expected,
                decrypted: sk.lwe.decrypt(&out, f.t_prime())?,
                error: out.error(&sk.lwe, expected, f.t_prime())?,
            };
            Ok((outcome, muls))
        })
        .collect::<Result<_>>()?;
    let elapsed = start.elapsed().as_secs_f64();

    let rounds = if two_round { 2 } else { 1 };
    let outcomes: Vec<TrialOutcome> = results.iter().map(|r| r.0).collect();
    let s_norm2 = sk.as_ref().map_or(p.n as u64, |s| s.lwe.norm2());
    let report = RunReport {
        preset: preset.name.clone(),
        scheme: preset.scheme,
        function: function.name().into(),
        seed,
        trials,
        failures: outcomes.iter().filter(|o| o.decrypted != o.expected).count() as u64,
        rounds,
        mean_abs_error: if trials == 0 {
            0.0
        } else {
            outcomes.iter().map(|o| o.error.unsigned_abs() as f64).sum::<f64>() / trials as f64
        },
        max_abs_error: outcomes.iter().map(|o| o.error.unsigned_abs()).max().unwrap_or(0),
        predicted_proxy: var_bootstrap_output(p, s_norm2),
        ring_mults: results.iter().map(|r| r.1).max().unwrap_or(0),
        key_sizes: key_size_report(p),
        seconds_per_bootstrap: (timing && trials > 0).then(|| elapsed / (trials * rounds) as f64),
    };
    Ok((report, outcomes))
}

pub fn run_experiment(
    preset: &ParameterPreset,
    function: &FunctionSpec,
    trials: u64,
    seed: u64,
    timing: bool,
) -> Result<RunReport> {
    Ok(run_experiment_detailed(preset, function, trials, seed, timing)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub mmpm: RunReport,
    pub tfhe: RunReport,
    /// Trials where both pipelines decrypted to the same value.
    pub agreeing: u64,
    /// TFHE bootstrapping-key size over the MMPM one; exactly `r`.
    pub boot_key_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_ratio: Option<f64>,
}

impl Comparison {
    pub fn failures(&self) -> u64 {
        self.mmpm.failures + self.tfhe.failures + (self.mmpm.trials - self.agreeing)
    }
}

/// Runs both pipelines on the same messages.
pub fn compare_schemes(
    mmpm: &ParameterPreset,
    tfhe: &ParameterPreset,
    function: &FunctionSpec,
    trials: u64,
    seed: u64,
    timing: bool,
) -> Result<Comparison> {
    let (a, b) = (&mmpm.params, &tfhe.params);
    if mmpm.scheme != Scheme::Mmpm || tfhe.scheme != Scheme::Tfhe {
        return Err(BenchError::Incompatible("expected an mmpm preset and a tfhe preset".into()));
    }
    if (a.n, a.q, a.t, a.t_prime) != (b.n, b.q, b.t, b.t_prime) || b.ring_degree != a.ring_degree * a.r || b.r != 1 {
        return Err(BenchError::Incompatible(format!(
            "{} (n={}, q={}, t={}, N·r={}) vs {} (n={}, q={}, t={}, N={})",
            mmpm.name,
            a.n,
            a.q,
            a.t,
            a.ring_degree * a.r,
            tfhe.name,
            b.n,
            b.q,
            b.t,
            b.ring_degree
        )));
    }
    let (ra, oa) = run_experiment_detailed(mmpm, function, trials, seed, timing)?;
    let (rb, ob) = run_experiment_detailed(tfhe, function, trials, seed, timing)?;
    let agreeing = oa
        .iter()
        .zip(&ob)
        .filter(|(x, y)| x.message == y.message && x.decrypted == y.decrypted)
        .count() as u64;
    let time_ratio = match (ra.seconds_per_bootstrap, rb.seconds_per_bootstrap) {
        (Some(x), Some(y)) if x > 0.0 => Some(y / x),
        _ => None,
    };
    Ok(Comparison {
        boot_key_ratio: rb.key_sizes.boot_words as f64 / ra.key_sizes.boot_words as f64,
        mmpm: ra,
        tfhe: rb,
        agreeing,
        time_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_parsing() {
        let f = parse_table("0 0\n1 3 # comment\n\n3 -3\n2 0\n", 4, 8).unwrap();
        assert_eq!(f.values(), &[0, 3, 0, 5]);
        assert!(f.is_nega_cyclic());
        assert!(parse_table("0 0\n1 1\n", 4, 8).is_err());
        assert!(parse_table("0 0\n0 1\n1 1\n2 1\n3 1", 4, 8).is_err());
        assert!(parse_table("0 0 0", 4, 8).is_err());
        assert!(parse_table("7 0", 4, 8).is_err());
        assert!(parse_table("x 0", 4, 8).is_err());
    }
}
