//! Named parameter sets: small ones that run in seconds, and the two reference
//! platforms for key-size accounting.

use std::fmt;

use mmpm_core::params::ParameterSet;
use serde::Serialize;

use crate::error::{BenchError, Result};

/// A 27-bit NTT prime (`≡ 1 mod 2^13`): rings up to `N = 2^12`.
pub const DESK_Q: u64 = 134_176_769;
/// A 54-bit NTT prime (`≡ 1 mod 2^24`): rings up to `N = 2^23`.
pub const PAPER_Q: u64 = 18_014_398_492_704_769;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Mmpm,
    Tfhe,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mmpm => "mmpm",
            Self::Tfhe => "tfhe",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPreset {
    pub name: String,
    pub params: ParameterSet,
    pub scheme: Scheme,
}

impl ParameterPreset {
    /// The TFHE counterpart: one ring of dimension `N·r`.
    pub fn tfhe_counterpart(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: self.params.single_ring(),
            scheme: Scheme::Tfhe,
        }
    }

    /// Structural validation plus the decryptability bound at the worst-case
    /// secret norm `‖s‖² = n`. Returns the advisory warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let p = &self.params;
        let mut warnings = p.validate()?;
        if self.scheme == Scheme::Tfhe {
            warnings.retain(|w| !w.contains("minimal r"));
            if p.r != 1 {
                return Err(BenchError::Preset(format!("{}: TFHE presets need r = 1", self.name)));
            }
        }
        let check = mmpm_core::noise::check_decryptable_bound(p, p.sigma_enc * p.sigma_enc, p.n as u64);
        if !check.holds {
            warnings.push(format!("decryptability bound fails: {}", check.diagnostic));
        }
        Ok(warnings)
    }
}

fn desk(q: u64, t: u64, r: usize) -> ParameterSet {
    ParameterSet {
        n: 16,
        q,
        t,
        t_prime: t,
        ring_degree: 64,
        r,
        big_q: DESK_Q,
        gadget_base: 1 << 9,
        ks_base: 25,
        sigma_enc: 1.0,
        sigma_boot: 3.2,
        sigma_ks: 3.2,
        h: 6.0,
    }
}

/// `log q = log t + 7`, `r = q/2N`.
fn paper(n: usize, log_t: u32) -> ParameterSet {
    let degree = 1usize << 11;
    let q = 1u64 << (log_t + 7);
    ParameterSet {
        n,
        q,
        t: 1 << log_t,
        t_prime: 1 << log_t,
        ring_degree: degree,
        r: (q / (2 * degree as u64)) as usize,
        big_q: PAPER_Q,
        gadget_base: 1 << 15,
        ks_base: 25,
        sigma_enc: 1.0,
        sigma_boot: 3.2,
        sigma_ks: 3.2,
        h: 6.0,
    }
}

fn mmpm(name: &str, params: ParameterSet) -> ParameterPreset {
    ParameterPreset {
        name: name.into(),
        params,
        scheme: Scheme::Mmpm,
    }
}

/// Every shipped preset, in display order.
pub fn all_presets() -> Vec<ParameterPreset> {
    let mut out = Vec::new();
    for (name, q, t, r) in [("desk-small", 512, 8, 4), ("desk-r1", 128, 4, 1), ("desk-r2", 256, 8, 2)] {
        out.push(mmpm(name, desk(q, t, r)));
    }
    for (r, q, t) in [(1usize, 128, 4), (2, 256, 8), (4, 512, 8)] {
        out.push(mmpm("", desk(q, t, r)).tfhe_counterpart(format!("desk-tfhe-r{r}")));
    }
    for log_t in 5..=11 {
        out.push(mmpm(&format!("paper-t{log_t}"), paper(512, log_t)));
    }
    for log_t in 5..=7 {
        out.push(mmpm("", paper(512, log_t)).tfhe_counterpart(format!("paper-tfhe-t{log_t}")));
    }
    for log_t in 5..=15 {
        out.push(mmpm(&format!("paper2-t{log_t}"), paper(1024, log_t)));
    }
    for log_t in 5..=11 {
        out.push(mmpm("", paper(1024, log_t)).tfhe_counterpart(format!("paper2-tfhe-t{log_t}")));
    }
    out
}

pub fn preset(name: &str) -> Result<ParameterPreset> {
    all_presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| BenchError::Preset(format!("unknown preset {name:?}")))
}

/// Applies `k=v,…` overrides to a base set. Keys are the field names of
/// [`ParameterSet`] plus `scheme` (`mmpm` or `tfhe`) and `N` for the ring
/// degree.
pub fn apply_overrides(base: ParameterPreset, spec: &str) -> Result<ParameterPreset> {
    let mut out = base;
    out.name = format!("{}+custom", out.name);
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| BenchError::Preset(format!("override {item:?} is not k=v")))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || BenchError::Preset(format!("bad value {value:?} for {key}"));
        let int = || value.parse::<u64>().map_err(|_| bad());
        let real = || value.parse::<f64>().map_err(|_| bad());
        let p = &mut out.params;
        match key {
            "n" => p.n = int()? as usize,
            "q" => p.q = int()?,
            "t" => p.t = int()?,
            "t_prime" | "t'" => p.t_prime = int()?,
            "N" | "ring_degree" => p.ring_degree = int()? as usize,
            "r" => p.r = int()? as usize,
            "Q" | "big_q" => p.big_q = int()?,
            "B" | "gadget_base" => p.gadget_base = int()?,
            "B_KS" | "ks_base" => p.ks_base = int()?,
            "sigma_enc" => p.sigma_enc = real()?,
            "sigma_boot" => p.sigma_boot = real()?,
            "sigma_ks" => p.sigma_ks = real()?,
            "H" | "h" => p.h = real()?,
            "scheme" => {
                out.scheme = match value {
                    "mmpm" => Scheme::Mmpm,
                    "tfhe" => Scheme::Tfhe,
                    _ => return Err(bad()),
                }
            }
            _ => return Err(BenchError::Preset(format!("unknown parameter {key:?}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mmpm_core::arith::is_prime;

    #[test]
    fn every_preset_is_valid_and_decryptable() {
        for p in all_presets() {
            let warnings = p.validate().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert!(warnings.is_empty(), "{}: {warnings:?}", p.name);
            let k = &p.params;
            assert_eq!(k.l_b(), mmpm_core::arith::digit_count(k.big_q, k.gadget_base));
            if p.scheme == Scheme::Tfhe {
                assert_eq!(k.r, 1);
                assert!(k.ring_degree.is_power_of_two());
            } else {
                assert_eq!(k.r as u64, k.q.div_ceil(2 * k.ring_degree as u64), "{}", p.name);
            }
        }
    }

    #[test]
    fn moduli() {
        assert!(is_prime(DESK_Q) && is_prime(PAPER_Q));
        assert_eq!(DESK_Q % (1 << 13), 1);
        assert_eq!(PAPER_Q % (1 << 24), 1);
        assert_eq!(64 - PAPER_Q.leading_zeros(), 54);
    }

    #[test]
    fn paper_rows() {
        let p = preset("paper-t7").unwrap().params;
        assert_eq!((p.q, p.r, p.l_b(), p.l_ks()), (1 << 14, 4, 4, 12));
        let t = preset("paper2-tfhe-t11").unwrap().params;
        assert_eq!((t.n, t.ring_degree, t.r), (1024, 1 << 17, 1));
        assert_eq!(preset("paper2-t15").unwrap().params.r, 1024);
        assert!(preset("nope").is_err());
    }

    #[test]
    fn overrides() {
        let p = apply_overrides(preset("desk-small").unwrap(), "n=8, sigma_boot=2.5,scheme=tfhe").unwrap();
        assert_eq!((p.params.n, p.params.sigma_boot, p.scheme), (8, 2.5, Scheme::Tfhe));
        assert!(apply_overrides(preset("desk-small").unwrap(), "x=1").is_err());
        assert!(apply_overrides(preset("desk-small").unwrap(), "n").is_err());
        assert!(apply_overrides(preset("desk-small").unwrap(), "n=-3").is_err());
    }
}
