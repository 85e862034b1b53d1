use std::sync::Arc;

use rand::Rng;

use crate::arith::{centered, from_signed, mul_mod, sub_mod};
use crate::ciphertext::lwe::decode;
use crate::error::{mismatch, Result};
use crate::ring::{negacyclic_mul, Ring, RingElement};
use crate::sampling::{ternary, uniform_mod, DiscreteGaussian};

/// Ternary ring secret `z ∈ R_{N,Q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlweSecret {
    z: RingElement,
    signed: Vec<i64>,
}

impl RlweSecret {
    pub fn random<R: Rng + ?Sized>(ring: &Arc<Ring>, rng: &mut R) -> Self {
        let signed = ternary(ring.degree(), rng);
        Self::from_signed(ring, signed).expect("degree matches")
    }

    pub fn from_signed(ring: &Arc<Ring>, signed: Vec<i64>) -> Result<Self> {
        let z = ring.from_signed(&signed)?;
        Ok(Self { z, signed })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.z.ring()
    }

    pub fn element(&self) -> &RingElement {
        &self.z
    }

    /// Coefficients `(z₀, …, z_{N-1})` in `{-1, 0, 1}`.
    pub fn coeffs(&self) -> &[i64] {
        &self.signed
    }

    pub fn norm2(&self) -> u64 {
        self.signed.iter().map(|&c| (c * c) as u64).sum()
    }

    /// Encryption of `value` with fresh error: phase `value + e`.
    pub fn encrypt_phase<R: Rng + ?Sized>(
        &self,
        value: &RingElement,
        noise: &DiscreteGaussian,
        rng: &mut R,
    ) -> Result<RlweCiphertext> {
        let ring = self.ring();
        let a = ring.from_coeffs(uniform_mod(ring.degree(), ring.modulus(), rng))?;
        let e = ring.from_signed(&noise.sample_vec(ring.degree(), rng))?;
        let b = negacyclic_mul(&a, &self.z)?.add(&e).add(value);
        RlweCiphertext::new(a, b)
    }

    /// Encryption of `m ∈ Z_{t'}[x]/(x^N+1)` with phase `m⌊Q/t'⌋ + e`.
    pub fn encrypt<R: Rng + ?Sized>(
        &self,
        m: &[u64],
        t_prime: u64,
        noise: &DiscreteGaussian,
        rng: &mut R,
    ) -> Result<RlweCiphertext> {
        let scaled = encode(self.ring(), m, t_prime)?;
        self.encrypt_phase(&scaled, noise, rng)
    }

    pub fn phase(&self, ct: &RlweCiphertext) -> Result<RingElement> {
        ct.phase(self)
    }

    pub fn decrypt(&self, ct: &RlweCiphertext, t_prime: u64) -> Result<Vec<u64>> {
        let q = ct.b.modulus();
        Ok(ct.phase(self)?.coeffs().iter().map(|&p| decode(p, t_prime, q)).collect())
    }
}

/// `m⌊Q/t'⌋`, with each coefficient of `m` lifted to `(-t'/2, t'/2]` first so
/// that negation commutes with scaling.
pub fn encode(ring: &Arc<Ring>, m: &[u64], t_prime: u64) -> Result<RingElement> {
    let q = ring.modulus();
    let delta = q / t_prime;
    ring.from_coeffs(
        m.iter()
            .map(|&c| from_signed(centered(c % t_prime, t_prime), q))
            .map(|c| mul_mod(c, delta, q))
            .collect(),
    )
}

/// `(a, b) ∈ R_{N,Q}²` with phase `b - a·z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlweCiphertext {
    pub(crate) a: RingElement,
    pub(crate) b: RingElement,
}

impl RlweCiphertext {
    pub fn new(a: RingElement, b: RingElement) -> Result<Self> {
        if a.ring() != b.ring() {
            return Err(mismatch!("RLWE components live in different rings"));
        }
        Ok(Self { a, b })
    }

    /// `(0, value)`.
    pub fn trivial(value: RingElement) -> Self {
        Self {
            a: value.ring().zero(),
            b: value,
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::trivial(ring.zero())
    }

    pub fn a(&self) -> &RingElement {
        &self.a
    }

    pub fn b(&self) -> &RingElement {
        &self.b
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.a.ring()
    }

    pub fn phase(&self, z: &RlweSecret) -> Result<RingElement> {
        Ok(self.b.sub(&negacyclic_mul(&self.a, &z.z)?))
    }

    /// Centered coefficients of `phase - expected`.
    pub fn error(&self, z: &RlweSecret, expected: &RingElement) -> Result<Vec<i64>> {
        let q = self.ring().modulus();
        Ok(self
            .phase(z)?
            .coeffs()
            .iter()
            .zip(expected.coeffs())
            .map(|(&p, &m)| centered(sub_mod(p, m, q), q))
            .collect())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(mismatch!("RLWE ciphertexts over different rings"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            a: self.a.sub(&other.a),
            b: self.b.sub(&other.b),
        })
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        self.a.add_assign(&other.a);
        self.b.add_assign(&other.b);
    }

    pub fn neg(&self) -> Self {
        Self {
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }

    /// `x^k · ct`; multiplies the plaintext by `x^k` without adding noise.
    pub fn mul_by_monomial(&self, k: i64) -> Self {
        Self {
            a: self.a.mul_by_monomial(k),
            b: self.b.mul_by_monomial(k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let ring = Ring::new(64, 134176769).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let z = RlweSecret::random(&ring, &mut rng);
        let g = DiscreteGaussian::new(3.2);
        for _ in 0..20 {
            let m = uniform_mod(64, 16, &mut rng);
            let ct = z.encrypt(&m, 16, &g, &mut rng).unwrap();
            assert_eq!(z.decrypt(&ct, 16).unwrap(), m);
        }
    }

    #[test]
    fn monomial_rotation_rotates_plaintext() {
        let ring = Ring::new(8, 134176769).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let z = RlweSecret::random(&ring, &mut rng);
        let g = DiscreteGaussian::new(3.2);
        let m = vec![1, 2, 3, 0, 0, 0, 0, 5];
        let ct = z.encrypt(&m, 8, &g, &mut rng).unwrap().mul_by_monomial(1);
        // x·m = -5 + x + 2x² + 3x³.
        assert_eq!(z.decrypt(&ct, 8).unwrap(), vec![3, 1, 2, 3, 0, 0, 0, 0]);
    }

    #[test]
    fn encoding_commutes_with_negation() {
        let ring = Ring::new(4, 134176769).unwrap();
        let pos = encode(&ring, &[1, 0, 0, 0], 7).unwrap();
        let neg = encode(&ring, &[6, 0, 0, 0], 7).unwrap();
        assert_eq!(pos.neg(), neg);
    }

    #[test]
    fn mismatched_rings_rejected() {
        let r1 = Ring::new(8, 97).unwrap();
        let r2 = Ring::new(16, 97).unwrap();
        assert!(RlweCiphertext::new(r1.zero(), r2.zero()).is_err());
        assert!(RlweCiphertext::zero(&r1).add(&RlweCiphertext::zero(&r2)).is_err());
    }
}
