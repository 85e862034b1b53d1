//! Negacyclic polynomial arithmetic over `Z_Q[x]/(x^N + 1)`.
//!
//! A [`Ring`] fixes the degree bound `N` and modulus `Q` and, when `Q` is a
//! prime with `Q = 1 mod 2N`, owns the twiddle tables for an exact negacyclic
//! NTT. Rings without a 2N-th root of unity (plaintext rings `Z_t'`, toy
//! moduli) fall back to schoolbook multiplication.
//!
//! Every multiplication of two ring elements, whether through
//! [`negacyclic_mul`] or a pointwise product in the transform domain, bumps a
//! per-thread counter readable with [`ring_mul_count`].

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use crate::arith::{
    add_mod, from_signed, inv_mod_prime, is_prime, mul_mod, neg_mod, pow_mod, sub_mod,
};
use crate::error::{config, mismatch, Result};

thread_local! {
    static RING_MULS: Cell<u64> = const { Cell::new(0) };
}

/// Ring multiplications performed on the current thread since the last reset.
pub fn ring_mul_count() -> u64 {
    RING_MULS.with(|c| c.get())
}

pub fn reset_ring_mul_count() {
    RING_MULS.with(|c| c.set(0));
}

/// Runs `f` and returns its result with the number of ring multiplications it
/// performed on this thread.
pub fn count_ring_muls<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = ring_mul_count();
    let out = f();
    (out, ring_mul_count() - before)
}

#[inline]
fn bump_ring_muls(k: u64) {
    RING_MULS.with(|c| c.set(c.get() + k));
}

#[derive(Debug)]
struct NttTables {
    psi_rev: Vec<u64>,
    psi_inv_rev: Vec<u64>,
    n_inv: u64,
}

impl NttTables {
    fn new(n: usize, q: u64) -> Option<Self> {
        let two_n = 2 * n as u64;
        if !is_prime(q) || (q - 1) % two_n != 0 {
            return None;
        }
        // psi has order exactly 2N iff psi^N = -1, since 2N is a power of two.
        let psi = (2..q).map(|g| pow_mod(g, (q - 1) / two_n, q)).find(|&psi| {
            pow_mod(psi, n as u64, q) == q - 1
        })?;
        let psi_inv = inv_mod_prime(psi, q);
        let bits = n.trailing_zeros();
        let mut psi_rev = vec![0; n];
        let mut psi_inv_rev = vec![0; n];
        let (mut p, mut pi) = (1u64, 1u64);
        for i in 0..n {
            let r = bit_reverse(i, bits);
            psi_rev[r] = p;
            psi_inv_rev[r] = pi;
            p = mul_mod(p, psi, q);
            pi = mul_mod(pi, psi_inv, q);
        }
        Some(Self {
            psi_rev,
            psi_inv_rev,
            n_inv: inv_mod_prime(n as u64, q),
        })
    }
}

fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// The quotient ring `Z_Q[x]/(x^N + 1)`.
pub struct Ring {
    degree: usize,
    modulus: u64,
    ntt: Option<NttTables>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .field("ntt", &self.ntt.is_some())
            .finish()
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(degree: usize, modulus: u64) -> Result<Arc<Self>> {
        if degree == 0 || !degree.is_power_of_two() {
            return Err(config!("ring degree {degree} is not a power of two"));
        }
        if modulus < 2 || modulus >= 1 << 62 {
            return Err(config!("ring modulus {modulus} outside [2, 2^62)"));
        }
        Ok(Arc::new(Self {
            degree,
            modulus,
            ntt: NttTables::new(degree, modulus),
        }))
    }

    /// Like [`Ring::new`] but refuses moduli without a negacyclic NTT.
    pub fn new_ntt(degree: usize, modulus: u64) -> Result<Arc<Self>> {
        let ring = Self::new(degree, modulus)?;
        if !ring.is_ntt_friendly() {
            return Err(config!(
                "modulus {modulus} is not an NTT prime for degree {degree} (need prime Q = 1 mod {})",
                2 * degree
            ));
        }
        Ok(ring)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_ntt_friendly(&self) -> bool {
        self.ntt.is_some()
    }

    pub fn zero(self: &Arc<Self>) -> RingElement {
        RingElement {
            ring: self.clone(),
            coeffs: vec![0; self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> RingElement {
        self.monomial(0)
    }

    /// `x^k` for any integer `k`, reduced with `x^N = -1`.
    pub fn monomial(self: &Arc<Self>, k: i64) -> RingElement {
        let mut out = self.zero();
        let two_n = 2 * self.degree as i64;
        let k = k.rem_euclid(two_n) as usize;
        if k < self.degree {
            out.coeffs[k] = 1 % self.modulus;
        } else {
            out.coeffs[k - self.degree] = self.modulus - 1;
        }
        out
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<u64>) -> Result<RingElement> {
        if coeffs.len() != self.degree {
            return Err(mismatch!(
                "expected {} coefficients, got {}",
                self.degree,
                coeffs.len()
            ));
        }
        Ok(RingElement {
            ring: self.clone(),
            coeffs: coeffs.into_iter().map(|c| c % self.modulus).collect(),
        })
    }

    pub fn from_signed(self: &Arc<Self>, coeffs: &[i64]) -> Result<RingElement> {
        self.from_coeffs(coeffs.iter().map(|&c| from_signed(c, self.modulus)).collect())
    }

    /// Forward negacyclic NTT; the output is in bit-reversed order.
    pub fn ntt_forward(&self, coeffs: &[u64]) -> Result<Vec<u64>> {
        let mut a = coeffs.to_vec();
        self.ntt_forward_in_place(&mut a)?;
        Ok(a)
    }

    pub fn ntt_inverse(&self, evals: &[u64]) -> Result<Vec<u64>> {
        let mut a = evals.to_vec();
        self.ntt_inverse_in_place(&mut a)?;
        Ok(a)
    }

    pub(crate) fn ntt_forward_in_place(&self, a: &mut [u64]) -> Result<()> {
        let tables = self.tables()?;
        let q = self.modulus;
        let n = self.degree;
        debug_assert_eq!(a.len(), n);
        let mut t = n;
        let mut m = 1;
        while m < n {
            t /= 2;
            for i in 0..m {
                let j1 = 2 * i * t;
                let s = tables.psi_rev[m + i];
                for j in j1..j1 + t {
                    let u = a[j];
                    let v = mul_mod(a[j + t], s, q);
                    a[j] = add_mod(u, v, q);
                    a[j + t] = sub_mod(u, v, q);
                }
            }
            m *= 2;
        }
        Ok(())
    }

    pub(crate) fn ntt_inverse_in_place(&self, a: &mut [u64]) -> Result<()> {
        let tables = self.tables()?;
        let q = self.modulus;
        let n = self.degree;
        debug_assert_eq!(a.len(), n);
        let mut t = 1;
        let mut m = n;
        while m > 1 {
            let h = m / 2;
            let mut j1 = 0;
            for i in 0..h {
                let s = tables.psi_inv_rev[h + i];
                for j in j1..j1 + t {
                    let u = a[j];
                    let v = a[j + t];
                    a[j] = add_mod(u, v, q);
                    a[j + t] = mul_mod(sub_mod(u, v, q), s, q);
                }
                j1 += 2 * t;
            }
            t *= 2;
            m = h;
        }
        for x in a.iter_mut() {
            *x = mul_mod(*x, tables.n_inv, q);
        }
        Ok(())
    }

    /// `acc += x * y` pointwise in the transform domain. Counts as one ring
    /// multiplication.
    pub(crate) fn pointwise_mul_acc(&self, acc: &mut [u64], x: &[u64], y: &[u64]) {
        let q = self.modulus;
        for ((a, &u), &v) in acc.iter_mut().zip(x).zip(y) {
            *a = add_mod(*a, mul_mod(u, v, q), q);
        }
        bump_ring_muls(1);
    }

    fn tables(&self) -> Result<&NttTables> {
        self.ntt.as_ref().ok_or_else(|| {
            config!(
                "modulus {} admits no negacyclic NTT of degree {}",
                self.modulus,
                self.degree
            )
        })
    }
}

/// A polynomial of degree below `N` with coefficients in `[0, Q)`.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Arc<Ring>,
    coeffs: Vec<u64>,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement(N={}, Q={}, {:?})", self.ring.degree, self.ring.modulus, self.coeffs)
    }
}

impl RingElement {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.ring.degree
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs[i]
    }

    /// Coefficients lifted to `(-Q/2, Q/2]`.
    pub fn centered_coeffs(&self) -> Vec<i64> {
        let q = self.ring.modulus;
        self.coeffs.iter().map(|&c| crate::arith::centered(c, q)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(mismatch!(
                "ring (N={}, Q={}) vs (N={}, Q={})",
                self.ring.degree,
                self.ring.modulus,
                other.ring.degree,
                other.ring.modulus
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_ring(other).expect("ring addition");
        let q = self.ring.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, q))
            .collect();
        Self {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_same_ring(other).expect("ring addition");
        let q = self.ring.modulus;
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = add_mod(*a, b, q);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_ring(other).expect("ring subtraction");
        let q = self.ring.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| sub_mod(a, b, q))
            .collect();
        Self {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let q = self.ring.modulus;
        Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|&a| neg_mod(a, q)).collect(),
        }
    }

    pub fn scalar_mul(&self, k: u64) -> Self {
        let q = self.ring.modulus;
        let k = k % q;
        Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, k, q)).collect(),
        }
    }

    /// `x^k * self`; no ring multiplication is consumed.
    pub fn mul_by_monomial(&self, k: i64) -> Self {
        let n = self.ring.degree;
        let q = self.ring.modulus;
        let k = k.rem_euclid(2 * n as i64) as usize;
        let mut out = vec![0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = i + k;
            let (j, negate) = match j / n {
                0 => (j, false),
                1 => (j - n, true),
                2 => (j - 2 * n, false),
                _ => unreachable!(),
            };
            out[j] = if negate { neg_mod(c, q) } else { c };
        }
        Self {
            ring: self.ring.clone(),
            coeffs: out,
        }
    }

    /// Transform-domain image of this element.
    pub fn to_ntt(&self) -> Result<Vec<u64>> {
        self.ring.ntt_forward(&self.coeffs)
    }
}

/// `a * b mod (x^N + 1, Q)`, through the NTT when the ring has one.
pub fn negacyclic_mul(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.check_same_ring(b)?;
    let ring = &a.ring;
    let coeffs = if ring.is_ntt_friendly() {
        let q = ring.modulus;
        let mut fa = a.coeffs.clone();
        let mut fb = b.coeffs.clone();
        ring.ntt_forward_in_place(&mut fa)?;
        ring.ntt_forward_in_place(&mut fb)?;
        for (x, &y) in fa.iter_mut().zip(&fb) {
            *x = mul_mod(*x, y, q);
        }
        ring.ntt_inverse_in_place(&mut fa)?;
        fa
    } else {
        schoolbook(&a.coeffs, &b.coeffs, ring.modulus)
    };
    bump_ring_muls(1);
    Ok(RingElement {
        ring: ring.clone(),
        coeffs,
    })
}

/// Quadratic negacyclic convolution; works for any modulus.
pub fn negacyclic_mul_schoolbook(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.check_same_ring(b)?;
    Ok(RingElement {
        ring: a.ring.clone(),
        coeffs: schoolbook(&a.coeffs, &b.coeffs, a.ring.modulus),
    })
}

fn schoolbook(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = mul_mod(x, y, q);
            let k = i + j;
            if k < n {
                out[k] = add_mod(out[k], p, q);
            } else {
                out[k - n] = sub_mod(out[k - n], p, q);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Signed big-integer schoolbook product, independent of both library paths.
    fn oracle_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        let n = a.len();
        let mut acc = vec![0i128; n];
        for i in 0..n {
            for j in 0..n {
                let p = a[i] as i128 * b[j] as i128;
                if i + j < n {
                    acc[i + j] += p;
                } else {
                    acc[i + j - n] -= p;
                }
            }
        }
        acc.into_iter().map(|c| c.rem_euclid(q as i128) as u64).collect()
    }

    fn random(ring: &Arc<Ring>, rng: &mut impl Rng) -> RingElement {
        let q = ring.modulus();
        ring.from_coeffs((0..ring.degree()).map(|_| rng.gen_range(0..q)).collect())
            .unwrap()
    }

    #[test]
    fn wraparound_gives_minus_one() {
        let ring = Ring::new(16, 97).unwrap();
        let a = ring.monomial(15);
        let b = ring.monomial(1);
        let c = negacyclic_mul(&a, &b).unwrap();
        let mut expected = vec![0; 16];
        expected[0] = 96;
        assert_eq!(c.coeffs(), &expected[..]);
    }

    #[test]
    fn one_is_identity() {
        let ring = Ring::new(16, 97).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random(&ring, &mut rng);
        assert_eq!(negacyclic_mul(&ring.one(), &p).unwrap(), p);
    }

    #[test]
    fn ntt_path_matches_oracle() {
        // 97 = 1 mod 32: NTT for N = 16.
        let ring = Ring::new(16, 97).unwrap();
        assert!(ring.is_ntt_friendly());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a = random(&ring, &mut rng);
            let b = random(&ring, &mut rng);
            let c = negacyclic_mul(&a, &b).unwrap();
            assert_eq!(c.coeffs(), &oracle_mul(a.coeffs(), b.coeffs(), 97)[..]);
            assert_eq!(c, negacyclic_mul_schoolbook(&a, &b).unwrap());
        }
    }

    #[test]
    fn schoolbook_fallback_for_composite_modulus() {
        let ring = Ring::new(8, 256).unwrap();
        assert!(!ring.is_ntt_friendly());
        assert!(ring.ntt_forward(&[0; 8]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(&ring, &mut rng);
        let b = random(&ring, &mut rng);
        let c = negacyclic_mul(&a, &b).unwrap();
        assert_eq!(c.coeffs(), &oracle_mul(a.coeffs(), b.coeffs(), 256)[..]);
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let r1 = Ring::new(16, 97).unwrap();
        let r2 = Ring::new(8, 97).unwrap();
        let r3 = Ring::new(16, 193).unwrap();
        assert!(negacyclic_mul(&r1.one(), &r2.one()).is_err());
        assert!(negacyclic_mul(&r1.one(), &r3.one()).is_err());
    }

    #[test]
    fn monomial_rotation_examples() {
        let ring = Ring::new(4, 17).unwrap();
        let a = ring.from_coeffs(vec![1, 2, 0, 0]).unwrap();
        assert_eq!(a.mul_by_monomial(1).coeffs(), &[0, 1, 2, 0]);
        assert_eq!(a.mul_by_monomial(4), a.neg());
        assert_eq!(a.mul_by_monomial(8), a);

        let b = ring.from_coeffs(vec![0, 0, 0, 3]).unwrap();
        let rotated = b.mul_by_monomial(2);
        assert_eq!(rotated.coeffs(), &[0, 14, 0, 0]);
        assert_eq!(rotated, negacyclic_mul_schoolbook(&b, &ring.monomial(2)).unwrap());
    }

    #[test]
    fn ntt_round_trip_and_zero() {
        let q = 134176769;
        let ring = Ring::new_ntt(64, q).unwrap();
        assert_eq!(ring.ntt_forward(&[0; 64]).unwrap(), vec![0; 64]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random(&ring, &mut rng);
            let fa = a.to_ntt().unwrap();
            assert_eq!(ring.ntt_inverse(&fa).unwrap(), a.coeffs());
        }
    }

    #[test]
    fn pointwise_product_is_negacyclic_product() {
        let q = 134176769;
        let ring = Ring::new_ntt(64, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random(&ring, &mut rng);
            let b = random(&ring, &mut rng);
            let mut acc = vec![0; 64];
            ring.pointwise_mul_acc(&mut acc, &a.to_ntt().unwrap(), &b.to_ntt().unwrap());
            let c = ring.ntt_inverse(&acc).unwrap();
            assert_eq!(c, oracle_mul(a.coeffs(), b.coeffs(), q));
        }
    }

    #[test]
    fn new_ntt_rejects_unfriendly_modulus() {
        // 97 = 1 mod 32 but not mod 128.
        assert!(Ring::new_ntt(64, 97).is_err());
        assert!(Ring::new(12, 97).is_err());
    }

    #[test]
    fn counter_tracks_products() {
        let ring = Ring::new(16, 97).unwrap();
        let ((), k) = count_ring_muls(|| {
            for _ in 0..5 {
                negacyclic_mul(&ring.one(), &ring.one()).unwrap();
            }
            let _ = ring.one().mul_by_monomial(3);
        });
        assert_eq!(k, 5);
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rings = [Ring::new(16, 97).unwrap(), Ring::new(64, 134176769).unwrap(), Ring::new(32, 1000).unwrap()];
        for case in 0..1000 {
            let ring = &rings[case % rings.len()];
            let a = random(ring, &mut rng);
            let b = random(ring, &mut rng);
            let c = random(ring, &mut rng);
            let mul = |x: &RingElement, y: &RingElement| negacyclic_mul(x, y).unwrap();
            assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
            assert_eq!(mul(&a, &b), mul(&b, &a));
            assert_eq!(mul(&a, &b.add(&c)), mul(&a, &b).add(&mul(&a, &c)));
        }
    }

    proptest! {
        #[test]
        fn rotations_compose(coeffs in proptest::collection::vec(0u64..97, 16), j in -100i64..100, k in -100i64..100) {
            let ring = Ring::new(16, 97).unwrap();
            let a = ring.from_coeffs(coeffs).unwrap();
            prop_assert_eq!(a.mul_by_monomial(j).mul_by_monomial(k), a.mul_by_monomial(j + k));
            prop_assert_eq!(a.mul_by_monomial(k), negacyclic_mul(&a, &ring.monomial(k)).unwrap());
        }
    }
}
