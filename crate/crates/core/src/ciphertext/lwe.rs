use rand::Rng;

use crate::arith::{add_mod, centered, from_signed, mul_mod, neg_mod, scale_round, sub_mod};
use crate::error::{domain, mismatch, Result};
use crate::sampling::{ternary, uniform_mod, DiscreteGaussian};

/// Ternary LWE secret `s ∈ {-1, 0, 1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LweSecret {
    coeffs: Vec<i64>,
}

impl LweSecret {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !(-1..=1).contains(*c)) {
            return Err(domain!("secret coefficient {c} is not ternary"));
        }
        Ok(Self { coeffs })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            coeffs: ternary(n, rng),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// `‖s‖₂²`, i.e. the number of nonzero coordinates.
    pub fn norm2(&self) -> u64 {
        self.coeffs.iter().map(|&c| (c * c) as u64).sum()
    }

    /// Fresh encryption of `m ∈ Z_t` with phase `m⌊q/t⌋ + e`.
    pub fn encrypt<R: Rng + ?Sized>(
        &self,
        m: u64,
        t: u64,
        q: u64,
        noise: &DiscreteGaussian,
        rng: &mut R,
    ) -> Result<LweCiphertext> {
        if m >= t {
            return Err(domain!("plaintext {m} outside Z_{t}"));
        }
        self.encrypt_phase(mul_mod(m, q / t, q), q, noise, rng)
    }

    /// Encryption whose phase is `value + e` with no plaintext scaling.
    pub fn encrypt_phase<R: Rng + ?Sized>(
        &self,
        value: u64,
        q: u64,
        noise: &DiscreteGaussian,
        rng: &mut R,
    ) -> Result<LweCiphertext> {
        let a = uniform_mod(self.dim(), q, rng);
        let e = from_signed(noise.sample(rng), q);
        let mut ct = LweCiphertext { a, b: 0, modulus: q };
        ct.b = add_mod(add_mod(value % q, e, q), ct.dot(self), q);
        Ok(ct)
    }

    pub fn phase(&self, ct: &LweCiphertext) -> Result<u64> {
        ct.phase(self)
    }

    pub fn decrypt(&self, ct: &LweCiphertext, t: u64) -> Result<u64> {
        Ok(decode(ct.phase(self)?, t, ct.modulus))
    }
}

/// `⌊phase·t/q⌉ mod t`.
pub fn decode(phase: u64, t: u64, q: u64) -> u64 {
    scale_round(phase, t, q) % t
}

/// `(a, b) ∈ Z_q^{n+1}` with phase `b - ⟨a, s⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LweCiphertext {
    pub(crate) a: Vec<u64>,
    pub(crate) b: u64,
    pub(crate) modulus: u64,
}

impl LweCiphertext {
    pub fn new(a: Vec<u64>, b: u64, modulus: u64) -> Result<Self> {
        if a.iter().chain([&b]).any(|&x| x >= modulus) {
            return Err(domain!("ciphertext entry outside [0, {modulus})"));
        }
        Ok(Self { a, b, modulus })
    }

    /// `(0^n, m⌊q/t⌋)`, decryptable under every secret.
    pub fn trivial(m: u64, t: u64, n: usize, q: u64) -> Self {
        Self::trivial_phase(mul_mod(m % t, q / t, q), n, q)
    }

    pub fn trivial_phase(value: u64, n: usize, q: u64) -> Self {
        Self {
            a: vec![0; n],
            b: value % q,
            modulus: q,
        }
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    fn dot(&self, s: &LweSecret) -> u64 {
        let q = self.modulus;
        self.a.iter().zip(&s.coeffs).fold(0, |acc, (&a, &si)| match si {
            1 => add_mod(acc, a, q),
            -1 => sub_mod(acc, a, q),
            _ => acc,
        })
    }

    pub fn phase(&self, s: &LweSecret) -> Result<u64> {
        if s.dim() != self.dim() {
            return Err(mismatch!("ciphertext dimension {} vs secret dimension {}", self.dim(), s.dim()));
        }
        Ok(sub_mod(self.b, self.dot(s), self.modulus))
    }

    /// Centered `phase - m⌊q/t⌋`.
    pub fn error(&self, s: &LweSecret, m: u64, t: u64) -> Result<i64> {
        let q = self.modulus;
        Ok(centered(sub_mod(self.phase(s)?, mul_mod(m % t, q / t, q), q), q))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus || self.dim() != other.dim() {
            return Err(mismatch!(
                "LWE (n={}, q={}) vs (n={}, q={})",
                self.dim(),
                self.modulus,
                other.dim(),
                other.modulus
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q = self.modulus;
        Ok(Self {
            a: self.a.iter().zip(&other.a).map(|(&x, &y)| add_mod(x, y, q)).collect(),
            b: add_mod(self.b, other.b, q),
            modulus: q,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q = self.modulus;
        Ok(Self {
            a: self.a.iter().zip(&other.a).map(|(&x, &y)| sub_mod(x, y, q)).collect(),
            b: sub_mod(self.b, other.b, q),
            modulus: q,
        })
    }

    pub fn neg(&self) -> Self {
        let q = self.modulus;
        Self {
            a: self.a.iter().map(|&x| neg_mod(x, q)).collect(),
            b: neg_mod(self.b, q),
            modulus: q,
        }
    }

    pub(crate) fn sub_assign(&mut self, other: &Self) {
        let q = self.modulus;
        for (x, &y) in self.a.iter_mut().zip(&other.a) {
            *x = sub_mod(*x, y, q);
        }
        self.b = sub_mod(self.b, other.b, q);
    }

    /// Adds `value` to the phase.
    pub fn add_constant(&self, value: u64) -> Self {
        let mut out = self.clone();
        out.b = add_mod(out.b, value % self.modulus, self.modulus);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_all_plaintexts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = LweSecret::random(16, &mut rng);
        let g = DiscreteGaussian::new(1.0);
        for _ in 0..100 {
            for m in 0..8 {
                let ct = s.encrypt(m, 8, 512, &g, &mut rng).unwrap();
                assert_eq!(s.decrypt(&ct, 8).unwrap(), m);
            }
        }
    }

    #[test]
    fn fresh_error_below_half_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = LweSecret::random(16, &mut rng);
        let g = DiscreteGaussian::new(1.0);
        for _ in 0..1000 {
            let m = rng.gen_range(0..8);
            let ct = s.encrypt(m, 8, 512, &g, &mut rng).unwrap();
            // Direct phase computation with the known secret, independent of `phase`.
            let dot: i64 = ct.a().iter().zip(s.coeffs()).map(|(&a, &si)| a as i64 * si).sum();
            let e = centered(from_signed(ct.b() as i64 - dot - (m * 64) as i64, 512), 512);
            assert!(e.abs() < 32);
        }
    }

    #[test]
    fn trivial_ciphertexts() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let s = LweSecret::random(8, &mut rng);
        for m in 0..8 {
            let ct = LweCiphertext::trivial(m, 8, 8, 512);
            assert_eq!(ct.a(), &[0; 8]);
            assert_eq!(ct.b(), m * 64);
            assert_eq!(s.decrypt(&ct, 8).unwrap(), m);
            assert_eq!(ct.phase(&s).unwrap(), m * 64);
        }
        let zero = LweSecret::new(vec![0; 8]).unwrap();
        let ct = LweCiphertext::new(vec![5; 8], 17, 64).unwrap();
        assert_eq!(ct.phase(&zero).unwrap(), 17);
    }

    #[test]
    fn boundary_error_flips_plaintext() {
        let s = LweSecret::new(vec![0; 4]).unwrap();
        // Delta = 64; phase 3*64 + 32 rounds up to 4.
        let ct = LweCiphertext::trivial_phase(3 * 64 + 32, 4, 512);
        assert_eq!(s.decrypt(&ct, 8).unwrap(), 4);
        let ct = LweCiphertext::trivial_phase(3 * 64 + 31, 4, 512);
        assert_eq!(s.decrypt(&ct, 8).unwrap(), 3);
    }

    #[test]
    fn rejects_out_of_range_plaintext_and_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let s = LweSecret::random(8, &mut rng);
        let g = DiscreteGaussian::new(1.0);
        assert!(s.encrypt(8, 8, 512, &g, &mut rng).is_err());
        let other = LweSecret::random(9, &mut rng);
        let ct = s.encrypt(1, 8, 512, &g, &mut rng).unwrap();
        assert!(ct.phase(&other).is_err());
        assert!(LweSecret::new(vec![2]).is_err());
    }

    proptest! {
        #[test]
        fn phase_matches_dot_product(a in prop::collection::vec(0u64..64, 8), b in 0u64..64,
                                     s in prop::collection::vec(-1i64..=1, 8)) {
            let ct = LweCiphertext::new(a.clone(), b, 64).unwrap();
            let sk = LweSecret::new(s.clone()).unwrap();
            let dot: i64 = a.iter().zip(&s).map(|(&x, &y)| x as i64 * y).sum();
            prop_assert_eq!(ct.phase(&sk).unwrap(), (b as i64 - dot).rem_euclid(64) as u64);
        }

        #[test]
        fn phase_is_linear(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = LweSecret::random(8, &mut rng);
            let q = 1 << 12;
            let c1 = LweCiphertext::new(uniform_mod(8, q, &mut rng), rng.gen_range(0..q), q).unwrap();
            let c2 = LweCiphertext::new(uniform_mod(8, q, &mut rng), rng.gen_range(0..q), q).unwrap();
            let sum = c1.add(&c2).unwrap();
            prop_assert_eq!(sum.phase(&s).unwrap(), add_mod(c1.phase(&s).unwrap(), c2.phase(&s).unwrap(), q));
            let diff = c1.sub(&c2).unwrap();
            prop_assert_eq!(diff.phase(&s).unwrap(), sub_mod(c1.phase(&s).unwrap(), c2.phase(&s).unwrap(), q));
        }
    }
}
