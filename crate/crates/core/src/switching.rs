//! Modulus switching, key switching and constant-term extraction.

use rand::Rng;

use crate::arith::{from_signed, mul_mod, neg_mod, scale_round};
use crate::ciphertext::{GadgetVector, LweCiphertext, LweSecret, RlweCiphertext, RlweSecret};
use crate::error::{config, mismatch, Result};
use crate::sampling::DiscreteGaussian;

/// `(⌊a·q_new/q⌉, ⌊b·q_new/q⌉)`, ties rounded up.
pub fn modulus_switch(ct: &LweCiphertext, q_new: u64) -> LweCiphertext {
    let q = ct.modulus;
    let scale = |x: u64| scale_round(x, q_new, q) % q_new;
    LweCiphertext {
        a: ct.a.iter().map(|&x| scale(x)).collect(),
        b: scale(ct.b),
        modulus: q_new,
    }
}

/// LWE encryption of the constant coefficient of the RLWE plaintext, under
/// the coefficient vector of the ring secret.
pub fn sample_extract(ct: &RlweCiphertext) -> LweCiphertext {
    let q = ct.ring().modulus();
    let a = ct.a.coeffs();
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    out.push(a[0]);
    out.extend((1..n).map(|j| neg_mod(a[n - j], q)));
    LweCiphertext {
        a: out,
        b: ct.b.coeff(0),
        modulus: q,
    }
}

/// Encryptions of `z_i·B_KSʲ·k` under `s`, for `i < N`, `j < l_KS`, `k < B_KS`.
#[derive(Debug, Clone, PartialEq)]
pub struct KeySwitchingKey {
    gadget: GadgetVector,
    from_dim: usize,
    to_dim: usize,
    modulus: u64,
    /// Flattened `[i][j][k]`.
    entries: Vec<LweCiphertext>,
}

impl KeySwitchingKey {
    pub fn from_entries(
        gadget: GadgetVector,
        from_dim: usize,
        to_dim: usize,
        modulus: u64,
        entries: Vec<LweCiphertext>,
    ) -> Result<Self> {
        let expected = from_dim * gadget.len() * gadget.base() as usize;
        if entries.len() != expected {
            return Err(config!("key-switching key has {} entries, expected {expected}", entries.len()));
        }
        if entries.iter().any(|e| e.dim() != to_dim || e.modulus() != modulus) {
            return Err(mismatch!("key-switching key entry with wrong shape"));
        }
        Ok(Self {
            gadget,
            from_dim,
            to_dim,
            modulus,
            entries,
        })
    }

    pub fn gadget(&self) -> GadgetVector {
        self.gadget
    }

    pub fn from_dim(&self) -> usize {
        self.from_dim
    }

    pub fn to_dim(&self) -> usize {
        self.to_dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[LweCiphertext] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &LweCiphertext {
        let l = self.gadget.len();
        let b = self.gadget.base() as usize;
        &self.entries[(i * l + j) * b + k]
    }

    /// Stored size in 64-bit words: `(n+1)·N·B_KS·l_KS`.
    pub fn word_count(&self) -> u64 {
        (self.to_dim as u64 + 1) * self.entries.len() as u64
    }
}

pub fn gen_ksk<R: Rng + ?Sized>(
    z: &RlweSecret,
    s: &LweSecret,
    gadget: GadgetVector,
    noise: &DiscreteGaussian,
    rng: &mut R,
) -> Result<KeySwitchingKey> {
    let q = z.ring().modulus();
    let powers = gadget.powers(q);
    let mut entries = Vec::with_capacity(z.coeffs().len() * gadget.len() * gadget.base() as usize);
    for &zi in z.coeffs() {
        for &p in &powers {
            for k in 0..gadget.base() {
                let value = mul_mod(from_signed(zi, q), mul_mod(p, k, q), q);
                entries.push(s.encrypt_phase(value, q, noise, rng)?);
            }
        }
    }
    KeySwitchingKey::from_entries(gadget, z.coeffs().len(), s.dim(), q, entries)
}

/// `(0ⁿ, b) - Σ ksk(i, j, a_{i,j})` where `a_{i,j}` are the base-`B_KS`
/// digits of `a_i`.
pub fn key_switch(ct: &LweCiphertext, ksk: &KeySwitchingKey) -> Result<LweCiphertext> {
    if ct.dim() != ksk.from_dim || ct.modulus != ksk.modulus {
        return Err(config!(
            "key-switching key maps (N={}, Q={}) but ciphertext has (N={}, Q={})",
            ksk.from_dim,
            ksk.modulus,
            ct.dim(),
            ct.modulus
        ));
    }
    let mut out = LweCiphertext::trivial_phase(ct.b, ksk.to_dim, ct.modulus);
    for (i, &ai) in ct.a.iter().enumerate() {
        for (j, d) in ksk.gadget.decompose(ai).into_iter().enumerate() {
            out.sub_assign(ksk.entry(i, j, d as usize));
        }
    }
    Ok(out)
}
