//! Noise and secret samplers.
//!
//! Errors come from a centered discrete Gaussian sampled by inversion of a
//! cumulative distribution table; secrets are uniform ternary.

use rand::Rng;

/// Centered discrete Gaussian over `Z` with `Pr[x] ∝ exp(-x²/2σ²)`,
/// truncated at `12σ` (the discarded mass is below `1e-30`).
#[derive(Debug, Clone)]
pub struct DiscreteGaussian {
    sigma: f64,
    /// `cdf[k] = Pr[|x| <= k]`.
    cdf: Vec<f64>,
}

impl DiscreteGaussian {
    pub fn new(sigma: f64) -> Self {
        assert!(sigma.is_finite() && sigma >= 0.0, "sigma must be finite and nonnegative");
        if sigma == 0.0 {
            return Self { sigma, cdf: vec![1.0] };
        }
        let tail = (12.0 * sigma).ceil().max(1.0) as usize;
        let weight = |k: usize| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp();
        // |x| = 0 has one preimage, every other magnitude two.
        let mut mass: Vec<f64> = (0..=tail)
            .map(|k| if k == 0 { weight(0) } else { 2.0 * weight(k) })
            .collect();
        let total: f64 = mass.iter().sum();
        let mut acc = 0.0;
        for m in mass.iter_mut() {
            acc += *m / total;
            *m = acc;
        }
        *mass.last_mut().unwrap() = 1.0;
        Self { sigma, cdf: mass }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        if self.cdf.len() == 1 {
            return 0;
        }
        let u: f64 = rng.gen();
        let k = self.cdf.partition_point(|&c| c <= u) as i64;
        if k != 0 && rng.gen::<bool>() {
            -k
        } else {
            k
        }
    }

    pub fn sample_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<i64> {
        (0..len).map(|_| self.sample(rng)).collect()
    }
}

/// Uniform over `{-1, 0, 1}`.
pub fn ternary<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-1..=1)).collect()
}

pub fn uniform_mod<R: Rng + ?Sized>(len: usize, modulus: u64, rng: &mut R) -> Vec<u64> {
    (0..len).map(|_| rng.gen_range(0..modulus)).collect()
}
