use rand::Rng;

use crate::arith::{centered, from_signed};
use crate::error::{config, domain, Result};

/// A table `f: Z_t → Z_{t'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookUpTable {
    values: Vec<u64>,
    t_prime: u64,
    nega_cyclic: bool,
}

impl LookUpTable {
    pub fn new(values: Vec<u64>, t_prime: u64) -> Result<Self> {
        if values.len() < 2 {
            return Err(config!("a table needs at least two inputs"));
        }
        if t_prime < 2 {
            return Err(config!("output modulus {t_prime} must be at least 2"));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % t_prime).collect();
        let t = values.len();
        let nega_cyclic = t % 2 == 0
            && (0..t / 2).all(|k| (values[k] + values[k + t / 2]) % t_prime == 0);
        Ok(Self {
            values,
            t_prime,
            nega_cyclic,
        })
    }

    /// Table of `f(m) mod t'` for `m ∈ [0, t)`.
    pub fn from_fn(t: u64, t_prime: u64, f: impl Fn(u64) -> i64) -> Result<Self> {
        Self::new((0..t).map(|m| from_signed(f(m), t_prime)).collect(), t_prime)
    }

    pub fn identity(t: u64) -> Result<Self> {
        Self::from_fn(t, t, |m| m as i64)
    }

    /// Uniformly random values on `[0, t/2)`, extended by `f(k + t/2) = -f(k)`.
    pub fn random_nega_cyclic<R: Rng + ?Sized>(t: u64, t_prime: u64, rng: &mut R) -> Result<Self> {
        if t % 2 != 0 {
            return Err(domain!("nega-cyclic tables need an even domain, got t = {t}"));
        }
        let half: Vec<u64> = (0..t / 2).map(|_| rng.gen_range(0..t_prime)).collect();
        let values = half
            .iter()
            .copied()
            .chain(half.iter().map(|&v| (t_prime - v) % t_prime))
            .collect();
        Self::new(values, t_prime)
    }

    pub fn random<R: Rng + ?Sized>(t: u64, t_prime: u64, rng: &mut R) -> Result<Self> {
        Self::new((0..t).map(|_| rng.gen_range(0..t_prime)).collect(), t_prime)
    }

    pub fn t(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn t_prime(&self) -> u64 {
        self.t_prime
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_nega_cyclic(&self) -> bool {
        self.nega_cyclic
    }

    pub fn eval(&self, m: u64) -> u64 {
        self.values[(m % self.t()) as usize]
    }
}

/// Extends a nega-cyclic `f` on `Z_t` to `f'` on `Z_{q'}` with
/// `f'(m·Δ + e) = f(m)` for `2|e| < Δ = q'/t`, and `f'(x + q'/2) = -f'(x)`.
///
/// Cells exactly halfway between two plateaus go to the lower one; the upper
/// half of the table is the negation of the lower half, so nega-cyclicity
/// holds by construction.
pub fn negacyclic_extend(f: &LookUpTable, q_prime: u64) -> Result<Vec<u64>> {
    if !f.is_nega_cyclic() {
        return Err(domain!("table is not nega-cyclic"));
    }
    let t = f.t();
    if q_prime < 2 * t {
        return Err(domain!("extension modulus {q_prime} is below 2t = {}", 2 * t));
    }
    if q_prime % t != 0 {
        return Err(domain!("extension modulus {q_prime} is not a multiple of t = {t}"));
    }
    let delta = q_prime / t;
    let tp = f.t_prime();
    let half: Vec<u64> = (0..q_prime / 2)
        .map(|x| f.eval((2 * x + delta - 1) / (2 * delta)))
        .collect();
    Ok(half.iter().copied().chain(half.iter().map(|&v| (tp - v) % tp)).collect())
}

/// `mp(x) = -t/2` on `[-t/2, t/2)` and `t/2` elsewhere on `[-t, t)`, as a
/// nega-cyclic table `Z_{2t} → Z_{2t}`.
pub fn msb_table(t: u64) -> Result<LookUpTable> {
    let two_t = 2 * t;
    LookUpTable::from_fn(two_t, two_t, |x| {
        let x = centered(x, two_t);
        let half = (t / 2) as i64;
        if (-half..half).contains(&x) {
            -half
        } else {
            half
        }
    })
}

/// `G: Z_{2t} → Z_{t'}` with `G(x) = f(x mod t)` on `[t/2, 3t/2)` and
/// `-f(x mod t)` elsewhere; nega-cyclic for any `f`.
pub fn window_table(f: &LookUpTable) -> Result<LookUpTable> {
    let t = f.t();
    let tp = f.t_prime();
    LookUpTable::new(
        (0..2 * t)
            .map(|x| {
                let v = f.eval(x % t);
                if (t / 2..3 * t / 2).contains(&x) {
                    v
                } else {
                    (tp - v) % tp
                }
            })
            .collect(),
        tp,
    )
}
