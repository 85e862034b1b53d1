//! Key sizes as stored (one 64-bit word per coefficient) and as they would be
//! with `⌈log₂ Q⌉`-bit packing.

use serde::Serialize;

use mmpm_core::params::ParameterSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KeySizeReport {
    /// `8·n·l_B·N`.
    pub boot_words: u64,
    /// `(n+1)·N·B_KS·l_KS`.
    pub ksk_words: u64,
    pub boot_bytes: u64,
    pub ksk_bytes: u64,
    pub log_q: u32,
    pub boot_packed_bytes: u64,
    pub ksk_packed_bytes: u64,
}

impl KeySizeReport {
    /// `"256.00 MiB + 2.35 GiB"`.
    pub fn summary(&self) -> String {
        format!("{} + {}", format_binary(self.boot_bytes), format_binary(self.ksk_bytes))
    }

    pub fn packed_summary(&self) -> String {
        format!("{} + {}", format_binary(self.boot_packed_bytes), format_binary(self.ksk_packed_bytes))
    }
}

pub fn key_size_report(p: &ParameterSet) -> KeySizeReport {
    let (n, degree) = (p.n as u64, p.ring_degree as u64);
    let boot_words = 8 * n * p.l_b() as u64 * degree;
    let ksk_words = (n + 1) * degree * p.ks_base * p.l_ks() as u64;
    let log_q = 64 - p.big_q.leading_zeros();
    let packed = |words: u64| (words * log_q as u64).div_ceil(8);
    KeySizeReport {
        boot_words,
        ksk_words,
        boot_bytes: 8 * boot_words,
        ksk_bytes: 8 * ksk_words,
        log_q,
        boot_packed_bytes: packed(boot_words),
        ksk_packed_bytes: packed(ksk_words),
    }
}

/// Two decimals in the largest binary unit that keeps the value at least 1.
pub fn format_binary(bytes: u64) -> String {
    const UNITS: [&str; 6] = ["B", "KiB", "MiB", "GiB", "TiB", "PiB"];
    let mut value = bytes as f64;
    let mut unit = 0;
    while value >= 1024.0 && unit + 1 < UNITS.len() {
        value /= 1024.0;
        unit += 1;
    }
    if unit == 0 {
        format!("{bytes} B")
    } else {
        format!("{value:.2} {}", UNITS[unit])
    }
}
