use std::sync::Arc;

use crate::ciphertext::{RgswCiphertext, RlweCiphertext, RlweSecret};
use crate::error::{mismatch, Result};
use crate::mmpm::{phi, Mmpm};
use crate::ring::{Ring, RingElement};

/// `r` RLWE ciphertexts over one ring: the blind-rotation accumulator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlweVector {
    entries: Vec<RlweCiphertext>,
}

impl RlweVector {
    pub fn new(entries: Vec<RlweCiphertext>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(mismatch!("an RLWE vector needs at least one entry"));
        };
        let ring = first.ring().clone();
        if entries.iter().any(|e| *e.ring() != ring) {
            return Err(mismatch!("RLWE vector entries over different rings"));
        }
        Ok(Self { entries })
    }

    /// `(0, v)` entrywise.
    pub fn trivial(v: Vec<RingElement>) -> Result<Self> {
        Self::new(v.into_iter().map(RlweCiphertext::trivial).collect())
    }

    pub fn entries(&self) -> &[RlweCiphertext] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<RlweCiphertext> {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.entries[0].ring()
    }

    /// `A · self` where `A` acts on both the `a` and `b` columns.
    pub fn apply(&self, a: &Mmpm) -> Result<Self> {
        let av: Vec<_> = self.entries.iter().map(|e| e.a().clone()).collect();
        let bv: Vec<_> = self.entries.iter().map(|e| e.b().clone()).collect();
        let entries = a
            .apply(&av)?
            .into_iter()
            .zip(a.apply(&bv)?)
            .map(|(a, b)| RlweCiphertext::new(a, b))
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, RlweCiphertext::sub)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, RlweCiphertext::add)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&RlweCiphertext, &RlweCiphertext) -> Result<RlweCiphertext>,
    ) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(mismatch!("RLWE vectors of length {} and {}", self.dim(), other.dim()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| f(x, y))
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    /// Entrywise external product with one RGSW ciphertext.
    pub fn external_product(&self, c: &RgswCiphertext) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| c.external_product(e))
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    pub fn phases(&self, z: &RlweSecret) -> Result<Vec<RingElement>> {
        self.entries.iter().map(|e| e.phase(z)).collect()
    }

    pub fn decrypt(&self, z: &RlweSecret, t_prime: u64) -> Result<Vec<Vec<u64>>> {
        self.entries.iter().map(|e| z.decrypt(e, t_prime)).collect()
    }
}

/// `acc + (Φ(-a)·acc - acc) ⊠ c₊ + (Φ(a)·acc - acc) ⊠ c₋`, which multiplies
/// the plaintext by `Φ(-a·s)` when `c₊`, `c₋` encrypt `[s = 1]`, `[s = -1]`.
/// Costs `2r` external products.
pub fn cmux_rlwe_vector(
    c_plus: &RgswCiphertext,
    c_minus: &RgswCiphertext,
    a: u64,
    acc: &RlweVector,
) -> Result<RlweVector> {
    let r = acc.dim();
    let degree = acc.ring().degree();
    let a = a as i64;
    let plus = acc.apply(&phi(-a, r, degree))?.sub(acc)?.external_product(c_plus)?;
    let minus = acc.apply(&phi(a, r, degree))?.sub(acc)?.external_product(c_minus)?;
    let mut out = acc.clone();
    for ((o, p), m) in out.entries.iter_mut().zip(&plus.entries).zip(&minus.entries) {
        o.add_assign(p);
        o.add_assign(m);
    }
    Ok(out)
}
