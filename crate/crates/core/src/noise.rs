//! Subgaussian variance-proxy bookkeeping for the bootstrapping pipeline.
//!
//! The per-step formulas are generic over the scalar type so the same code
//! runs in `f64` for reporting and in exact rationals for identities.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Zero};

use crate::params::ParameterSet;

/// Scalars the variance formulas can be evaluated in.
pub trait Proxy: Clone + Num + FromPrimitive + PartialOrd {}

impl<T: Clone + Num + FromPrimitive + PartialOrd> Proxy for T {}

fn c<T: Proxy>(x: u64) -> T {
    T::from_u64(x).expect("representable constant")
}

/// `2·N·l_B·B²·σ² + β²`.
pub fn var_external_product<T: Proxy>(beta2: T, sigma2: T, degree: u64, l_b: u64, base: u64) -> T {
    c::<T>(2) * c(degree) * c(l_b) * c(base) * c(base) * sigma2 + beta2
}

/// `β² + 4·N·l_B·B²·σ²`: two external products against independent keys.
pub fn var_cmux<T: Proxy>(beta2: T, sigma2: T, degree: u64, l_b: u64, base: u64) -> T {
    beta2 + c::<T>(4) * c(degree) * c(l_b) * c(base) * c(base) * sigma2
}

/// `(q_new/q_old)²·β² + (‖s‖² + 1)/12`.
pub fn var_modswitch<T: Proxy>(beta2: T, q_old: u64, q_new: u64, s_norm2: u64) -> T {
    let ratio = c::<T>(q_new) / c(q_old);
    ratio.clone() * ratio * beta2 + c::<T>(s_norm2 + 1) / c(12)
}

/// `β² + N·l_KS·σ_KS²`.
pub fn var_keyswitch<T: Proxy>(beta2: T, sigma_ks2: T, degree: u64, l_ks: u64) -> T {
    beta2 + c::<T>(degree) * c(l_ks) * sigma_ks2
}

/// Inputs to the bootstrapping output variance.
#[derive(Debug, Clone)]
pub struct BootstrapNoise<T> {
    pub n: u64,
    pub degree: u64,
    pub l_b: u64,
    pub base: u64,
    pub l_ks: u64,
    pub q: u64,
    pub big_q: u64,
    pub sigma2: T,
    pub sigma_ks2: T,
    pub s_norm2: u64,
}

impl<T: Proxy> BootstrapNoise<T> {
    /// `4nN l_B B² (q/Q)² σ² + N l_KS (q/Q)² σ_KS² + (‖s‖² + 1)/12`.
    pub fn closed_form(&self) -> T {
        let ratio = c::<T>(self.q) / c(self.big_q);
        let ratio2 = ratio.clone() * ratio;
        c::<T>(4) * c(self.n) * c(self.degree) * c(self.l_b) * c(self.base) * c(self.base)
            * ratio2.clone()
            * self.sigma2.clone()
            + c::<T>(self.degree) * c(self.l_ks) * ratio2 * self.sigma_ks2.clone()
            + c::<T>(self.s_norm2 + 1) / c(12)
    }

    /// The same quantity folded step by step: `n` CMuxes from a noiseless
    /// accumulator, extraction (no change), key switch, modulus switch.
    pub fn composed(&self) -> T {
        let mut v = T::zero();
        for _ in 0..self.n {
            v = var_cmux(v, self.sigma2.clone(), self.degree, self.l_b, self.base);
        }
        v = var_keyswitch(v, self.sigma_ks2.clone(), self.degree, self.l_ks);
        var_modswitch(v, self.big_q, self.q, self.s_norm2)
    }
}

impl BootstrapNoise<f64> {
    pub fn from_params(p: &ParameterSet, s_norm2: u64) -> Self {
        Self {
            n: p.n as u64,
            degree: p.ring_degree as u64,
            l_b: p.l_b() as u64,
            base: p.gadget_base,
            l_ks: p.l_ks() as u64,
            q: p.q,
            big_q: p.big_q,
            sigma2: p.sigma_boot * p.sigma_boot,
            sigma_ks2: p.sigma_ks * p.sigma_ks,
            s_norm2,
        }
    }
}

/// Variance proxy of a bootstrapped ciphertext (in units of `q`). The
/// rounding noise of the initial switch `q → 2Nr` is not part of it; see
/// [`var_rotation_input`].
pub fn var_bootstrap_output(p: &ParameterSet, s_norm2: u64) -> f64 {
    BootstrapNoise::from_params(p, s_norm2).closed_form()
}

/// Variance proxy (in units of `2Nr`) of the phase the blind rotation reads,
/// for an input ciphertext with proxy `beta2` at modulus `q`.
pub fn var_rotation_input(p: &ParameterSet, beta2: f64, s_norm2: u64) -> f64 {
    var_modswitch(beta2, p.q, p.q_prime(), s_norm2)
}

/// `r = ⌈q/2N⌉` and `q' = 2Nr ≥ q`.
pub fn choose_r(q: u64, degree: u64) -> (u64, u64) {
    let r = q.div_ceil(2 * degree);
    (r, 2 * degree * r)
}

/// A variance proxy at a given modulus, judged against the decoding radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget {
    pub proxy: f64,
    pub modulus: u64,
    pub plaintext_modulus: u64,
    pub h: f64,
}

impl NoiseBudget {
    /// `⌊q/t⌋/2`.
    pub fn radius(&self) -> f64 {
        (self.modulus / self.plaintext_modulus) as f64 / 2.0
    }

    pub fn bound(&self) -> f64 {
        self.h * self.proxy.sqrt()
    }

    pub fn is_decryptable(&self) -> bool {
        self.bound() < self.radius()
    }

    /// `log2(radius / (H·σ))`; positive when decryptable.
    pub fn margin_bits(&self) -> f64 {
        (self.radius() / self.bound()).log2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    pub diagnostic: String,
}

/// Whether `N²r² > ((‖s‖²+1)/12) / (1/(H²t²) - 4β²/q²)`, evaluated exactly:
/// after switching to `2Nr`, an input with proxy `β²` at modulus `q` stays
/// within `H` standard deviations of the decoding radius.
pub fn check_decryptable_bound(p: &ParameterSet, beta2: f64, s_norm2: u64) -> BoundCheck {
    let rat = |x: f64| BigRational::from_float(x).expect("finite");
    let int = |x: u64| BigRational::from_integer(x.into());
    let h2 = rat(p.h) * rat(p.h);
    let t2 = int(p.t) * int(p.t);
    let q2 = int(p.q) * int(p.q);
    let slack = BigRational::from_integer(1.into()) / (h2 * t2) - int(4) * rat(beta2) / q2;
    if slack <= BigRational::zero() {
        return BoundCheck {
            holds: false,
            diagnostic: format!(
                "unsatisfiable for every r: input noise β² = {beta2} already exceeds q/(2Ht) = {:.3}",
                p.q as f64 / (2.0 * p.h * p.t as f64)
            ),
        };
    }
    let nr = int(p.ring_degree as u64 * p.r as u64);
    let lhs = nr.clone() * nr * slack.clone();
    let rhs = int(s_norm2 + 1) / int(12);
    let holds = lhs > rhs;
    let needed = {
        let x: f64 = num_traits::ToPrimitive::to_f64(&(rhs / slack)).unwrap_or(f64::INFINITY);
        x.sqrt() / p.ring_degree as f64
    };
    BoundCheck {
        holds,
        diagnostic: format!(
            "r = {} {} the minimum {:.3} implied by N = {}, t = {}, q = {}, H = {}, β² = {beta2}, ‖s‖² = {s_norm2}",
            p.r,
            if holds { "exceeds" } else { "does not exceed" },
            needed,
            p.ring_degree,
            p.t,
            p.q,
            p.h
        ),
    }
}
