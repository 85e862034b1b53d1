use std::sync::Arc;

use rand::Rng;

use crate::ciphertext::gadget::GadgetVector;
use crate::ciphertext::rlwe::{RlweCiphertext, RlweSecret};
use crate::error::{mismatch, Result};
use crate::ring::{negacyclic_mul, Ring, RingElement};
use crate::sampling::DiscreteGaussian;

/// A `2l_B × 2` matrix over the ring whose phase is `m·(g_B, -z·g_B)ᵀ + e`.
///
/// Rows `0..l_B` have phase `e + m·Bⁱ`, rows `l_B..2l_B` have phase
/// `e - m·Bⁱ·z`. The rows are also kept in the transform domain so that an
/// external product costs exactly `4·l_B` pointwise ring multiplications.
#[derive(Debug, Clone)]
pub struct RgswCiphertext {
    rows: Vec<RlweCiphertext>,
    gadget: GadgetVector,
    ntt_rows: Option<Vec<[Vec<u64>; 2]>>,
}

impl PartialEq for RgswCiphertext {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.gadget == other.gadget
    }
}

impl RgswCiphertext {
    pub fn from_rows(rows: Vec<RlweCiphertext>, gadget: GadgetVector) -> Result<Self> {
        if rows.len() != 2 * gadget.len() {
            return Err(mismatch!("RGSW needs {} rows, got {}", 2 * gadget.len(), rows.len()));
        }
        let ring = rows[0].ring().clone();
        if rows.iter().any(|r| *r.ring() != ring) {
            return Err(mismatch!("RGSW rows over different rings"));
        }
        let ntt_rows = if ring.is_ntt_friendly() {
            Some(
                rows.iter()
                    .map(|r| Ok([r.a.to_ntt()?, r.b.to_ntt()?]))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        Ok(Self {
            rows,
            gadget,
            ntt_rows,
        })
    }

    /// Error-free encryption: `m` times the block-diagonal gadget matrix.
    pub fn trivial(m: &RingElement, gadget: GadgetVector) -> Result<Self> {
        let ring = m.ring();
        let powers = gadget.powers(ring.modulus());
        let mut rows = Vec::with_capacity(2 * gadget.len());
        for &p in &powers {
            rows.push(RlweCiphertext::new(ring.zero(), m.scalar_mul(p))?);
        }
        for &p in &powers {
            rows.push(RlweCiphertext::new(m.scalar_mul(p), ring.zero())?);
        }
        Self::from_rows(rows, gadget)
    }

    /// Fresh encryption of a small plaintext (in practice `0`, `1` or `±x^k`).
    pub fn encrypt<R: Rng + ?Sized>(
        m: &RingElement,
        z: &RlweSecret,
        gadget: GadgetVector,
        noise: &DiscreteGaussian,
        rng: &mut R,
    ) -> Result<Self> {
        let ring = z.ring();
        if m.ring() != ring {
            return Err(mismatch!("RGSW plaintext and secret over different rings"));
        }
        let powers = gadget.powers(ring.modulus());
        let zero = ring.zero();
        let mut rows = Vec::with_capacity(2 * gadget.len());
        for &p in &powers {
            let mut row = z.encrypt_phase(&zero, noise, rng)?;
            row.b = row.b.add(&m.scalar_mul(p));
            rows.push(row);
        }
        for &p in &powers {
            let mut row = z.encrypt_phase(&zero, noise, rng)?;
            row.a = row.a.add(&m.scalar_mul(p));
            rows.push(row);
        }
        Self::from_rows(rows, gadget)
    }

    pub fn rows(&self) -> &[RlweCiphertext] {
        &self.rows
    }

    pub fn gadget(&self) -> GadgetVector {
        self.gadget
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.rows[0].ring()
    }

    /// External product `g_B⁻¹(a, b) · C`.
    pub fn external_product(&self, c: &RlweCiphertext) -> Result<RlweCiphertext> {
        let ring = self.ring().clone();
        if c.ring() != &ring {
            return Err(mismatch!(
                "RLWE over (N={}, Q={}) times RGSW over (N={}, Q={})",
                c.ring().degree(),
                c.ring().modulus(),
                ring.degree(),
                ring.modulus()
            ));
        }
        let l = self.gadget.len();
        let n = ring.degree();
        let mut digits_b = vec![vec![0u64; n]; l];
        let mut digits_a = vec![vec![0u64; n]; l];
        self.gadget.decompose_coeffs(c.b.coeffs(), &mut digits_b);
        self.gadget.decompose_coeffs(c.a.coeffs(), &mut digits_a);
        // Digits of b pair with the top block, digits of a with the bottom.
        let paired = digits_b.into_iter().chain(digits_a);

        match &self.ntt_rows {
            Some(ntt_rows) => {
                let mut acc_a = vec![0u64; n];
                let mut acc_b = vec![0u64; n];
                for (mut d, row) in paired.zip(ntt_rows) {
                    ring.ntt_forward_in_place(&mut d)?;
                    ring.pointwise_mul_acc(&mut acc_a, &d, &row[0]);
                    ring.pointwise_mul_acc(&mut acc_b, &d, &row[1]);
                }
                ring.ntt_inverse_in_place(&mut acc_a)?;
                ring.ntt_inverse_in_place(&mut acc_b)?;
                RlweCiphertext::new(ring.from_coeffs(acc_a)?, ring.from_coeffs(acc_b)?)
            }
            None => {
                let mut acc = RlweCiphertext::zero(&ring);
                for (d, row) in paired.zip(&self.rows) {
                    let d = ring.from_coeffs(d)?;
                    acc.a.add_assign(&negacyclic_mul(&d, &row.a)?);
                    acc.b.add_assign(&negacyclic_mul(&d, &row.b)?);
                }
                Ok(acc)
            }
        }
    }

    /// `g_B⁻¹(C1) · C2`: row-wise external products; plaintexts multiply.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.gadget != other.gadget {
            return Err(mismatch!("RGSW gadgets differ"));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| other.external_product(row))
            .collect::<Result<_>>()?;
        Self::from_rows(rows, self.gadget)
    }
}

/// `rlwe_rgsw_mul(c, C)`.
pub fn rlwe_rgsw_mul(c: &RlweCiphertext, rgsw: &RgswCiphertext) -> Result<RlweCiphertext> {
    rgsw.external_product(c)
}

/// `rgsw_rgsw_mul(C1, C2)`.
pub fn rgsw_rgsw_mul(c1: &RgswCiphertext, c2: &RgswCiphertext) -> Result<RgswCiphertext> {
    c1.mul(c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::count_ring_muls;
    use crate::sampling::uniform_mod;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: u64 = 134176769;

    fn setup(n: usize, seed: u64) -> (Arc<Ring>, RlweSecret, GadgetVector, DiscreteGaussian, ChaCha8Rng) {
        let ring = Ring::new(n, Q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = RlweSecret::random(&ring, &mut rng);
        (ring, z, GadgetVector::new(512, Q).unwrap(), DiscreteGaussian::new(3.2), rng)
    }

    /// Plaintext product in Z_t[x]/(x^N+1) computed by signed schoolbook.
    fn plain_mul(p: &[u64], m: &[i64], t: u64) -> Vec<u64> {
        let n = p.len();
        let mut out = vec![0i64; n];
        for i in 0..n {
            for j in 0..n {
                let v = p[i] as i64 * m[j];
                if i + j < n {
                    out[i + j] += v;
                } else {
                    out[i + j - n] -= v;
                }
            }
        }
        out.into_iter().map(|c| c.rem_euclid(t as i64) as u64).collect()
    }

    #[test]
    fn trivial_identity_and_zero() {
        let (ring, z, g, noise, mut rng) = setup(16, 31);
        let m = uniform_mod(16, 8, &mut rng);
        let c = z.encrypt(&m, 8, &noise, &mut rng).unwrap();
        let one = RgswCiphertext::trivial(&ring.one(), g).unwrap();
        assert_eq!(z.decrypt(&one.external_product(&c).unwrap(), 8).unwrap(), m);
        let zero = RgswCiphertext::trivial(&ring.zero(), g).unwrap();
        assert_eq!(z.decrypt(&zero.external_product(&c).unwrap(), 8).unwrap(), vec![0; 16]);
    }

    #[test]
    fn encryption_of_zero_rows_are_rlwe_zeros() {
        let (ring, z, g, noise, mut rng) = setup(16, 32);
        let c = RgswCiphertext::encrypt(&ring.zero(), &z, g, &noise, &mut rng).unwrap();
        assert_eq!(c.rows().len(), 2 * g.len());
        for row in c.rows() {
            assert_eq!(z.decrypt(row, 8).unwrap(), vec![0; 16]);
        }
    }

    #[test]
    fn monomial_exponents_add() {
        let (ring, z, _, noise, mut rng) = setup(8, 33);
        // A small base keeps the doubled noise of RGSW x RGSW well inside Δ/2.
        let g = GadgetVector::new(16, Q).unwrap();
        let mut m = vec![0; 8];
        m[2] = 1;
        let c = z.encrypt(&m, 8, &noise, &mut rng).unwrap();
        let x3 = RgswCiphertext::encrypt(&ring.monomial(3), &z, g, &noise, &mut rng).unwrap();
        let out = rlwe_rgsw_mul(&c, &x3).unwrap();
        let mut expected = vec![0; 8];
        expected[5] = 1;
        assert_eq!(z.decrypt(&out, 8).unwrap(), expected);

        // x^6 · x^3 = x^9 = -x.
        let x6 = RgswCiphertext::encrypt(&ring.monomial(6), &z, g, &noise, &mut rng).unwrap();
        let prod = rgsw_rgsw_mul(&x6, &x3).unwrap();
        let one = z.encrypt(&[1, 0, 0, 0, 0, 0, 0, 0], 8, &noise, &mut rng).unwrap();
        assert_eq!(z.decrypt(&prod.external_product(&one).unwrap(), 8).unwrap(), vec![0, 7, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn rgsw_identity_and_zero_absorber() {
        let (ring, z, _, noise, mut rng) = setup(8, 34);
        let g = GadgetVector::new(16, Q).unwrap();
        let x2 = RgswCiphertext::encrypt(&ring.monomial(2), &z, g, &noise, &mut rng).unwrap();
        let one = RgswCiphertext::trivial(&ring.one(), g).unwrap();
        let zero = RgswCiphertext::trivial(&ring.zero(), g).unwrap();
        let c = z.encrypt(&[1, 1, 0, 0, 0, 0, 0, 0], 8, &noise, &mut rng).unwrap();
        let via_id = x2.mul(&one).unwrap().external_product(&c).unwrap();
        assert_eq!(z.decrypt(&via_id, 8).unwrap(), vec![0, 0, 1, 1, 0, 0, 0, 0]);
        let via_zero = x2.mul(&zero).unwrap().external_product(&c).unwrap();
        assert_eq!(z.decrypt(&via_zero, 8).unwrap(), vec![0; 8]);
    }

    #[test]
    fn homomorphic_product_of_small_plaintexts() {
        let (ring, z, g, noise, mut rng) = setup(16, 35);
        for _ in 0..20 {
            let p = uniform_mod(16, 8, &mut rng);
            let k = rng.gen_range(0..32);
            let sign: i64 = if rng.gen() { 1 } else { -1 };
            let m = ring.monomial(k).scalar_mul(if sign == 1 { 1 } else { Q - 1 });
            let mut m_plain = vec![0i64; 16];
            if k < 16 {
                m_plain[k as usize] = sign;
            } else {
                m_plain[k as usize - 16] = -sign;
            }
            let c = RlweCiphertext::trivial(crate::ciphertext::rlwe::encode(&ring, &p, 8).unwrap());
            let rgsw = RgswCiphertext::encrypt(&m, &z, g, &noise, &mut rng).unwrap();
            let out = rlwe_rgsw_mul(&c, &rgsw).unwrap();
            assert_eq!(z.decrypt(&out, 8).unwrap(), plain_mul(&p, &m_plain, 8));
        }
    }

    #[test]
    fn external_product_costs_four_l_b_ring_mults() {
        let (ring, z, g, noise, mut rng) = setup(64, 36);
        let c = z.encrypt(&[0; 64], 8, &noise, &mut rng).unwrap();
        let rgsw = RgswCiphertext::encrypt(&ring.one(), &z, g, &noise, &mut rng).unwrap();
        let (_, k) = count_ring_muls(|| rgsw.external_product(&c).unwrap());
        assert_eq!(k, 4 * g.len() as u64);

        // Same count on the schoolbook path.
        let ring = Ring::new(16, 1 << 20).unwrap();
        let g = GadgetVector::new(4, 1 << 20).unwrap();
        let z = RlweSecret::random(&ring, &mut rng);
        let c = z.encrypt(&[0; 16], 8, &noise, &mut rng).unwrap();
        let rgsw = RgswCiphertext::encrypt(&ring.one(), &z, g, &noise, &mut rng).unwrap();
        let (out, k) = count_ring_muls(|| rgsw.external_product(&c).unwrap());
        assert_eq!(k, 4 * g.len() as u64);
        assert_eq!(z.decrypt(&out, 8).unwrap(), vec![0; 16]);
    }

    #[test]
    fn mismatched_ring_rejected() {
        let (ring, _, g, _, _) = setup(16, 37);
        let other = Ring::new(32, Q).unwrap();
        let rgsw = RgswCiphertext::trivial(&ring.one(), g).unwrap();
        assert!(rgsw.external_product(&RlweCiphertext::zero(&other)).is_err());
    }
}
