#![allow(dead_code)]

use mmpm_core::params::ParameterSet;

pub const DESK_Q: u64 = 134176769;

/// n = 16, N = 64, r = 4, q = 512, t = 8.
pub fn desk_small() -> ParameterSet {
    ParameterSet {
        n: 16,
        q: 512,
        t: 8,
        t_prime: 8,
        ring_degree: 64,
        r: 4,
        big_q: DESK_Q,
        gadget_base: 512,
        ks_base: 25,
        sigma_enc: 1.0,
        sigma_boot: 3.2,
        sigma_ks: 3.2,
        h: 6.0,
    }
}

/// The same shape with `r` chosen for `q = 2N·r`.
pub fn desk_with_r(r: usize) -> ParameterSet {
    let mut p = desk_small();
    p.r = r;
    p.q = 128 * r as u64;
    if r == 1 {
        p.t = 4;
        p.t_prime = 4;
    }
    p
}

/// Plaintext mirror of the accumulation loop: `Φ(b)·Π Φ(-a_k s_k)` applied
/// to the test vector, with nothing encrypted.
pub fn simulate_rotation(
    a: &[u64],
    b: u64,
    s: &[i64],
    v: &[mmpm_core::ring::RingElement],
) -> Vec<mmpm_core::ring::RingElement> {
    use mmpm_core::mmpm::phi;
    let r = v.len();
    let n = v[0].degree();
    let mut acc = phi(b as i64, r, n).apply(v).unwrap();
    for (&ak, &sk) in a.iter().zip(s) {
        acc = phi(-(ak as i64) * sk, r, n).apply(&acc).unwrap();
    }
    acc
}
