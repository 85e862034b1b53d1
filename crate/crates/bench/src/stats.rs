//! Measured error distributions next to their predicted variance proxies.
//! Every error is read off with the secret key, so these are ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use mmpm_core::arith::{centered, sub_mod};
use mmpm_core::bootstrap::{boot_mmpm, cmux_rlwe_vector, keygen, LookUpTable, RlweVector};
use mmpm_core::ciphertext::{encode, LweSecret, RgswCiphertext, RlweSecret};
use mmpm_core::mmpm::phi;
use mmpm_core::noise::{var_bootstrap_output, var_cmux, var_external_product, var_modswitch};
use mmpm_core::params::ParameterSet;
use mmpm_core::ring::RingElement;
use mmpm_core::sampling::{uniform_mod, DiscreteGaussian};
use mmpm_core::switching::modulus_switch;
use mmpm_core::Result;

/// Observed errors (one per coefficient) and the proxy they are judged by.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSample {
    pub errors: Vec<f64>,
    pub predicted: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub predicted: f64,
    /// `variance / predicted`.
    pub ratio: f64,
    pub exceed_fraction: f64,
}

impl ErrorSample {
    pub fn mean(&self) -> f64 {
        self.errors.iter().sum::<f64>() / self.errors.len() as f64
    }

    /// Second moment about zero: the errors are centered by construction, so
    /// this is the quantity a variance proxy bounds.
    pub fn variance(&self) -> f64 {
        self.errors.iter().map(|e| e * e).sum::<f64>() / self.errors.len() as f64
    }

    pub fn ratio(&self) -> f64 {
        self.variance() / self.predicted
    }

    /// Fraction of `|e| > H·sqrt(predicted)`.
    pub fn exceed_fraction(&self, h: f64) -> f64 {
        let bound = h * self.predicted.sqrt();
        self.errors.iter().filter(|e| e.abs() > bound).count() as f64 / self.errors.len() as f64
    }

    /// `predicted/k ≤ variance ≤ k·predicted`.
    pub fn within_factor(&self, k: f64) -> bool {
        let v = self.variance();
        v * k >= self.predicted && v <= k * self.predicted
    }

    pub fn summary(&self, h: f64) -> ErrorSummary {
        ErrorSummary {
            samples: self.errors.len(),
            mean: self.mean(),
            variance: self.variance(),
            predicted: self.predicted,
            ratio: self.ratio(),
            exceed_fraction: self.exceed_fraction(h),
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn ring_errors(phase: &RingElement, expected: &RingElement) -> Vec<f64> {
    let q = phase.modulus();
    phase
        .coeffs()
        .iter()
        .zip(expected.coeffs())
        .map(|(&x, &y)| centered(sub_mod(x, y, q), q) as f64)
        .collect()
}

fn collect(per_trial: Vec<Vec<f64>>, predicted: f64) -> ErrorSample {
    ErrorSample {
        errors: per_trial.into_iter().flatten().collect(),
        predicted,
    }
}

/// RLWE encryptions of random plaintexts (noise `σ_enc`) times fresh RGSW
/// encryptions of 1 (noise `σ_boot`).
pub fn external_product_errors(p: &ParameterSet, trials: u64, seed: u64) -> Result<ErrorSample> {
    let ring = p.ring()?;
    let gadget = p.gadget()?;
    let z = RlweSecret::random(&ring, &mut stream(seed, 0));
    let (enc, boot) = (DiscreteGaussian::new(p.sigma_enc), DiscreteGaussian::new(p.sigma_boot));
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, trial + 1);
            let m = uniform_mod(p.ring_degree, p.t_prime, &mut rng);
            let expected = encode(&ring, &m, p.t_prime)?;
            let ct = z.encrypt_phase(&expected, &enc, &mut rng)?;
            let key = RgswCiphertext::encrypt(&ring.one(), &z, gadget, &boot, &mut rng)?;
            Ok(ring_errors(&z.phase(&key.external_product(&ct)?)?, &expected))
        })
        .collect::<Result<_>>()?;
    let predicted = var_external_product(
        p.sigma_enc * p.sigma_enc,
        p.sigma_boot * p.sigma_boot,
        p.ring_degree as u64,
        p.l_b() as u64,
        p.gadget_base,
    );
    Ok(collect(per_trial, predicted))
}

/// One accumulator step on an `r`-vector of fresh encryptions, with a fresh
/// ternary `s` and key pair per trial and a uniform `a ∈ Z_{2Nr}`.
pub fn cmux_errors(p: &ParameterSet, trials: u64, seed: u64) -> Result<ErrorSample> {
    let ring = p.ring()?;
    let gadget = p.gadget()?;
    let z = RlweSecret::random(&ring, &mut stream(seed, 0));
    let (enc, boot) = (DiscreteGaussian::new(p.sigma_enc), DiscreteGaussian::new(p.sigma_boot));
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, trial + 1);
            let plain: Vec<RingElement> = (0..p.r)
                .map(|_| encode(&ring, &uniform_mod(p.ring_degree, p.t_prime, &mut rng), p.t_prime))
                .collect::<Result<_>>()?;
            let acc = RlweVector::new(
                plain
                    .iter()
                    .map(|m| z.encrypt_phase(m, &enc, &mut rng))
                    .collect::<Result<_>>()?,
            )?;
            let s: i64 = rng.gen_range(-1..=1);
            let bit = |b: bool| if b { ring.one() } else { ring.zero() };
            let plus = RgswCiphertext::encrypt(&bit(s == 1), &z, gadget, &boot, &mut rng)?;
            let minus = RgswCiphertext::encrypt(&bit(s == -1), &z, gadget, &boot, &mut rng)?;
            let a = rng.gen_range(0..p.q_prime());
            let out = cmux_rlwe_vector(&plus, &minus, a, &acc)?;
            let expected = phi(-(a as i64) * s, p.r, p.ring_degree).apply(&plain)?;
            let mut errors = Vec::new();
            for (phase, e) in out.phases(&z)?.iter().zip(&expected) {
                errors.extend(ring_errors(phase, e));
            }
            Ok(errors)
        })
        .collect::<Result<_>>()?;
    let predicted = var_cmux(
        p.sigma_enc * p.sigma_enc,
        p.sigma_boot * p.sigma_boot,
        p.ring_degree as u64,
        p.l_b() as u64,
        p.gadget_base,
    );
    Ok(collect(per_trial, predicted))
}

/// Fresh LWE encryptions at `Q` (noise `σ_KS`) of uniform phases, switched
/// to `q`; the error is measured against the exact rational `μ·q/Q`.
pub fn modswitch_errors(p: &ParameterSet, trials: u64, seed: u64) -> Result<ErrorSample> {
    let s = LweSecret::random(p.n, &mut stream(seed, 0));
    let noise = DiscreteGaussian::new(p.sigma_ks);
    let (big_q, q) = (p.big_q, p.q);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, trial + 1);
            let mu = rng.gen_range(0..big_q);
            let ct = s.encrypt_phase(mu, big_q, &noise, &mut rng)?;
            let phase = s.phase(&modulus_switch(&ct, q))? as f64;
            let exact = mu as f64 * q as f64 / big_q as f64;
            let e = (phase - exact).rem_euclid(q as f64);
            Ok(vec![if e >= q as f64 / 2.0 { e - q as f64 } else { e }])
        })
        .collect::<Result<_>>()?;
    let predicted = var_modswitch(p.sigma_ks * p.sigma_ks, big_q, q, s.norm2());
    Ok(collect(per_trial, predicted))
}

/// Output errors of full single-round bootstraps of random nega-cyclic
/// tables, under one key set.
pub fn bootstrap_errors(p: &ParameterSet, trials: u64, seed: u64) -> Result<ErrorSample> {
    let (sk, keys) = keygen(p, &mut stream(seed, 0))?;
    let noise = DiscreteGaussian::new(p.sigma_enc);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, trial + 1);
            let f = LookUpTable::random_nega_cyclic(p.t, p.t_prime, &mut rng)?;
            let m = rng.gen_range(0..p.t);
            let ct = sk.lwe.encrypt(m, p.t, p.q, &noise, &mut rng)?;
            let out = boot_mmpm(&ct, &f, &keys)?;
            Ok(vec![out.error(&sk.lwe, f.eval(m), p.t_prime)? as f64])
        })
        .collect::<Result<_>>()?;
    Ok(collect(per_trial, var_bootstrap_output(p, sk.lwe.norm2())))
}

/// `E[d²]` for a digit uniform on `[0, B)`: `(B-1)(2B-1)/6`.
pub fn uniform_digit_second_moment(base: u64) -> f64 {
    let b = base as f64;
    (b - 1.0) * (2.0 * b - 1.0) / 6.0
}
