use std::sync::Arc;

use crate::arith::digit_count;
use crate::ciphertext::GadgetVector;
use crate::error::{config, Result};
use crate::noise::choose_r;
use crate::ring::Ring;

/// Everything a bootstrapping pipeline is configured by.
///
/// `q` is the LWE modulus with plaintext modulus `t`; bootstrapping rotates in
/// `R_{N,Q}` with `r`-dimensional test vectors, so ciphertexts are switched to
/// `q' = 2Nr` first. `t'` is the plaintext modulus of the table's outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    pub n: usize,
    pub q: u64,
    pub t: u64,
    pub t_prime: u64,
    pub ring_degree: usize,
    pub r: usize,
    pub big_q: u64,
    pub gadget_base: u64,
    pub ks_base: u64,
    pub sigma_enc: f64,
    pub sigma_boot: f64,
    pub sigma_ks: f64,
    pub h: f64,
}

impl ParameterSet {
    pub fn l_b(&self) -> usize {
        digit_count(self.big_q, self.gadget_base)
    }

    pub fn l_ks(&self) -> usize {
        digit_count(self.big_q, self.ks_base)
    }

    /// `2Nr`, the modulus ciphertexts are switched to before rotation.
    pub fn q_prime(&self) -> u64 {
        2 * self.ring_degree as u64 * self.r as u64
    }

    pub fn gadget(&self) -> Result<GadgetVector> {
        GadgetVector::new(self.gadget_base, self.big_q)
    }

    pub fn ks_gadget(&self) -> Result<GadgetVector> {
        GadgetVector::new(self.ks_base, self.big_q)
    }

    pub fn ring(&self) -> Result<Arc<Ring>> {
        Ring::new_ntt(self.ring_degree, self.big_q)
    }

    /// Structural checks that make the pipeline well defined. Returns
    /// advisory warnings (currently only a non-minimal `r`).
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.n == 0 {
            return Err(config!("LWE dimension must be positive"));
        }
        if self.r == 0 {
            return Err(config!("r must be positive"));
        }
        if self.t < 2 || self.t % 2 != 0 {
            return Err(config!("plaintext modulus t = {} must be even and at least 2", self.t));
        }
        if self.t_prime < 2 {
            return Err(config!("output plaintext modulus t' = {} must be at least 2", self.t_prime));
        }
        if self.q < 2 * self.t || self.q % self.t != 0 {
            return Err(config!("q = {} must be a multiple of t = {} and at least 2t", self.q, self.t));
        }
        if self.q_prime() < 2 * self.t || self.q_prime() % self.t != 0 {
            return Err(config!("2Nr = {} must be a multiple of t = {} and at least 2t", self.q_prime(), self.t));
        }
        if self.big_q <= self.q {
            return Err(config!("Q = {} must exceed q = {}", self.big_q, self.q));
        }
        if self.gadget_base < 2 || self.ks_base < 2 {
            return Err(config!("gadget bases must be at least 2"));
        }
        for (name, s) in [("sigma_enc", self.sigma_enc), ("sigma_boot", self.sigma_boot), ("sigma_ks", self.sigma_ks)] {
            if !(s.is_finite() && s >= 0.0) {
                return Err(config!("{name} = {s} must be finite and nonnegative"));
            }
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(config!("H = {} must be positive", self.h));
        }
        self.ring()?;
        let mut warnings = Vec::new();
        let (r_min, _) = choose_r(self.q, self.ring_degree as u64);
        if self.r as u64 != r_min {
            warnings.push(format!(
                "r = {} differs from the minimal r = ceil(q/2N) = {r_min}",
                self.r
            ));
        }
        Ok(warnings)
    }

    /// The same pipeline on one ring of dimension `N·r` with `r = 1`.
    pub fn single_ring(&self) -> Self {
        Self {
            ring_degree: self.ring_degree * self.r,
            r: 1,
            ..self.clone()
        }
    }
}
