use crate::arith::digit_count;
use crate::error::{config, Result};

/// Unsigned base-`B` digit decomposition `x = Σ dᵢ Bⁱ`, `dᵢ ∈ [0, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetVector {
    base: u64,
    len: usize,
}

impl GadgetVector {
    /// The shortest gadget covering `[0, modulus)`.
    pub fn new(base: u64, modulus: u64) -> Result<Self> {
        if base < 2 {
            return Err(config!("gadget base {base} must be at least 2"));
        }
        Ok(Self {
            base,
            len: digit_count(modulus, base),
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `B^i mod modulus` for `i < len`.
    pub fn powers(&self, modulus: u64) -> Vec<u64> {
        let mut p = 1u128;
        (0..self.len)
            .map(|_| {
                let v = (p % modulus as u128) as u64;
                p *= self.base as u128;
                v
            })
            .collect()
    }

    pub fn decompose(&self, mut x: u64) -> Vec<u64> {
        let mut digits = Vec::with_capacity(self.len);
        for _ in 0..self.len {
            digits.push(x % self.base);
            x /= self.base;
        }
        debug_assert_eq!(x, 0, "value exceeds gadget range");
        digits
    }

    /// Writes digit `i` of every coefficient into `out[i]`.
    pub(crate) fn decompose_coeffs(&self, coeffs: &[u64], out: &mut [Vec<u64>]) {
        for (k, &c) in coeffs.iter().enumerate() {
            let mut x = c;
            for row in out.iter_mut() {
                row[k] = x % self.base;
                x /= self.base;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn base_four_digits() {
        let g = GadgetVector::new(4, 256).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.decompose(27), vec![3, 2, 1, 0]);
        assert_eq!(g.decompose(0), vec![0; 4]);
    }

    #[test]
    fn rejects_unary_base() {
        assert!(GadgetVector::new(1, 256).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn recomposition(x in 0u64..134176769, base in prop::sample::select(vec![2u64, 3, 25, 512, 1 << 15])) {
            let q = 134176769;
            let g = GadgetVector::new(base, q).unwrap();
            let digits = g.decompose(x);
            prop_assert_eq!(digits.len(), g.len());
            prop_assert!(digits.iter().all(|&d| d < base));
            let back: u128 = digits.iter().rev().fold(0u128, |acc, &d| acc * base as u128 + d as u128);
            prop_assert_eq!(back, x as u128);
        }
    }
}
