//! Functional bootstrapping: blind rotation of a test vector by `Φ(phase)`,
//! constant-term extraction, key switching and a final modulus switch; plus
//! the single-ring CMux baseline.

mod keys;
mod lut;
mod vector;

pub use keys::{keygen, BootstrappingKeySet, EvaluationKeySet, SecretKeySet};
pub use lut::{msb_table, negacyclic_extend, window_table, LookUpTable};
pub use vector::{cmux_rlwe_vector, RlweVector};

use std::sync::Arc;

use crate::ciphertext::{encode, LweCiphertext, RlweCiphertext};
use crate::error::{config, domain, mismatch, Result};
use crate::mmpm::{build_test_vector, phi, TestVector};
use crate::ring::{Ring, RingElement};
use crate::switching::{key_switch, modulus_switch, sample_extract};

/// Which blind rotation a bootstrap runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rotation {
    /// `r`-dimensional test vectors rotated by `Φ(c)` in `R_{N,Q}^r`.
    Mmpm,
    /// A single test polynomial rotated by `x^c` in `R_{N,Q}`; the key set
    /// must have `r = 1`.
    Tfhe,
}

/// Scales a plaintext test vector into `R_{N,Q}^r` by `⌊Q/t'⌋` and returns
/// the noiseless accumulator `Φ(b)·(0, v·⌊Q/t'⌋)`.
fn initial_accumulator(tv: &TestVector, b: u64, ring: &Arc<Ring>) -> Result<RlweVector> {
    let v: Vec<RingElement> = tv
        .entries()
        .iter()
        .map(|e| encode(ring, e, tv.t_prime()))
        .collect::<Result<_>>()?;
    RlweVector::trivial(v)?.apply(&phi(b as i64, tv.dim(), ring.degree()))
}

/// Homomorphically computes `Φ(phase(ct'))·v_test·⌊Q/t'⌋` for `ct'` at
/// modulus `2Nr`.
pub fn blind_rotate_mmpm(
    ct: &LweCiphertext,
    tv: &TestVector,
    bsk: &BootstrappingKeySet,
    ring: &Arc<Ring>,
) -> Result<RlweVector> {
    let q_prime = 2 * ring.degree() as u64 * tv.dim() as u64;
    if ct.modulus() != q_prime {
        return Err(domain!("rotation input has modulus {}, expected 2Nr = {q_prime}", ct.modulus()));
    }
    if tv.degree() != ring.degree() {
        return Err(mismatch!("test vector degree {} vs ring degree {}", tv.degree(), ring.degree()));
    }
    if ct.dim() != bsk.len() {
        return Err(mismatch!("ciphertext dimension {} vs {} bootstrapping keys", ct.dim(), bsk.len()));
    }
    let mut acc = initial_accumulator(tv, ct.b(), ring)?;
    for (k, &a) in ct.a().iter().enumerate() {
        let (plus, minus) = bsk.get(k);
        acc = cmux_rlwe_vector(plus, minus, a, &acc)?;
    }
    Ok(acc)
}

/// Single-polynomial CMux accumulation: `x^{phase(ct')}·p·⌊Q/t'⌋` for `ct'`
/// at modulus `2N'`, `N'` the ring dimension.
pub fn blind_rotate_tfhe(
    ct: &LweCiphertext,
    test_poly: &[u64],
    t_prime: u64,
    bsk: &BootstrappingKeySet,
    ring: &Arc<Ring>,
) -> Result<RlweCiphertext> {
    let degree = ring.degree();
    if !degree.is_power_of_two() {
        return Err(domain!("ring dimension {degree} is not a power of two"));
    }
    if ct.modulus() != 2 * degree as u64 {
        return Err(domain!("rotation input has modulus {}, expected 2N = {}", ct.modulus(), 2 * degree));
    }
    if ct.dim() != bsk.len() {
        return Err(mismatch!("ciphertext dimension {} vs {} bootstrapping keys", ct.dim(), bsk.len()));
    }
    let mut acc = RlweCiphertext::trivial(encode(ring, test_poly, t_prime)?).mul_by_monomial(ct.b() as i64);
    for (k, &a) in ct.a().iter().enumerate() {
        let (plus, minus) = bsk.get(k);
        let a = a as i64;
        let d_plus = plus.external_product(&acc.mul_by_monomial(-a).sub(&acc)?)?;
        let d_minus = minus.external_product(&acc.mul_by_monomial(a).sub(&acc)?)?;
        acc = acc.add(&d_plus)?.add(&d_minus)?;
    }
    Ok(acc)
}

fn check_input(ct: &LweCiphertext, keys: &EvaluationKeySet) -> Result<()> {
    let p = &keys.params;
    if ct.modulus() != p.q || ct.dim() != p.n {
        return Err(mismatch!(
            "ciphertext (n={}, q={}) for parameters (n={}, q={})",
            ct.dim(),
            ct.modulus(),
            p.n,
            p.q
        ));
    }
    Ok(())
}

/// Bootstraps `ct` (plaintext modulus `f.t()`) through `f`, which must be
/// nega-cyclic. The result is an LWE ciphertext at modulus `q` under the
/// original secret, encrypting `f(m)` with plaintext modulus `f.t_prime()`.
pub fn bootstrap(ct: &LweCiphertext, f: &LookUpTable, keys: &EvaluationKeySet, rotation: Rotation) -> Result<LweCiphertext> {
    check_input(ct, keys)?;
    let p = &keys.params;
    let q_prime = p.q_prime();
    let extended = negacyclic_extend(f, q_prime)?;
    let switched = modulus_switch(ct, q_prime);
    let extracted = match rotation {
        Rotation::Mmpm => {
            let tv = build_test_vector(&extended, f.t_prime(), p.r, p.ring_degree)?;
            let acc = blind_rotate_mmpm(&switched, &tv, &keys.bsk, &keys.ring)?;
            sample_extract(&acc.entries()[0])
        }
        Rotation::Tfhe => {
            if p.r != 1 {
                return Err(config!("the single-ring rotation needs r = 1, got r = {}", p.r));
            }
            let tv = build_test_vector(&extended, f.t_prime(), 1, p.ring_degree)?;
            let acc = blind_rotate_tfhe(&switched, &tv.entries()[0], f.t_prime(), &keys.bsk, &keys.ring)?;
            sample_extract(&acc)
        }
    };
    let switched_key = key_switch(&extracted, &keys.ksk)?;
    Ok(modulus_switch(&switched_key, p.q))
}

/// Blind rotation by MMPMs, sample extraction and key switching.
pub fn boot_mmpm(ct: &LweCiphertext, f: &LookUpTable, keys: &EvaluationKeySet) -> Result<LweCiphertext> {
    bootstrap(ct, f, keys, Rotation::Mmpm)
}

/// The same pipeline with the single-ring baseline rotation.
pub fn boot_tfhe(ct: &LweCiphertext, f: &LookUpTable, keys: &EvaluationKeySet) -> Result<LweCiphertext> {
    bootstrap(ct, f, keys, Rotation::Tfhe)
}

/// Evaluates an arbitrary `f: Z_t → Z_{t'}` on a ciphertext whose plaintext
/// `m + t·b` lives in `Z_{2t}` with an unknown top bit `b`.
///
/// Round one bootstraps the nega-cyclic `mp` to get `y = ∓t/2`; adding `t/2`
/// and subtracting `y` moves the plaintext into `[t/2, 3t/2)` without
/// changing it mod `t`. Round two evaluates `f(x mod t)` on that window,
/// extended nega-cyclically to `Z_{2t}`.
pub fn boot_general_with(
    ct: &LweCiphertext,
    f: &LookUpTable,
    keys: &EvaluationKeySet,
    rotation: Rotation,
) -> Result<LweCiphertext> {
    let t = f.t();
    if t % 2 != 0 {
        return Err(domain!("the two-round procedure needs an even t, got {t}"));
    }
    let msb = general_first_round(ct, t, keys, rotation)?;
    let q = keys.params.q;
    let shifted = ct.add_constant((t / 2) * (q / (2 * t))).sub(&msb)?;
    bootstrap(&shifted, &window_table(f)?, keys, rotation)
}

/// Round one of [`boot_general_with`]: an encryption of `mp(m')` with
/// plaintext modulus `2t`.
pub fn general_first_round(ct: &LweCiphertext, t: u64, keys: &EvaluationKeySet, rotation: Rotation) -> Result<LweCiphertext> {
    bootstrap(ct, &msb_table(t)?, keys, rotation)
}

pub fn boot_general(ct: &LweCiphertext, f: &LookUpTable, keys: &EvaluationKeySet) -> Result<LweCiphertext> {
    boot_general_with(ct, f, keys, Rotation::Mmpm)
}
