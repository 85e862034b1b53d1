//! Scalar arithmetic in `Z_q` on canonical representatives in `[0, q)`.

#[inline]
pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
pub fn neg_mod(a: u64, q: u64) -> u64 {
    if a == 0 {
        0
    } else {
        q - a
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    if q <= 1 << 32 {
        (a * b) % q
    } else {
        ((a as u128 * b as u128) % q as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `q`.
pub fn inv_mod_prime(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// Reduces a signed integer into `[0, q)`.
#[inline]
pub fn from_signed(x: i64, q: u64) -> u64 {
    x.rem_euclid(q as i64) as u64
}

/// Centered representative in `(-q/2, q/2]`.
#[inline]
pub fn centered(x: u64, q: u64) -> i64 {
    if x > q / 2 {
        x as i64 - q as i64
    } else {
        x as i64
    }
}

/// `round(x * num / den)` with ties resolved upwards.
#[inline]
pub fn scale_round(x: u64, num: u64, den: u64) -> u64 {
    ((2 * x as u128 * num as u128 + den as u128) / (2 * den as u128)) as u64
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest `l` with `base^l >= modulus`, i.e. `ceil(log_base(modulus))`.
pub fn digit_count(modulus: u64, base: u64) -> usize {
    assert!(base >= 2, "digit base must be at least 2");
    let mut l = 0;
    let mut reach: u128 = 1;
    while reach < modulus as u128 {
        reach *= base as u128;
        l += 1;
    }
    l
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(134176769));
        assert!(is_prime(18014398492704769));
        assert!(!is_prime(134176769 * 3));
    }

    #[test]
    fn rounding_ties_go_up() {
        assert_eq!(scale_round(100, 500, 1000), 50);
        assert_eq!(scale_round(1, 1, 2), 1);
        assert_eq!(scale_round(3, 1, 2), 2);
        assert_eq!(scale_round(0, 7, 9), 0);
    }

    #[test]
    fn digit_counts() {
        assert_eq!(digit_count(256, 4), 4);
        assert_eq!(digit_count(134176769, 512), 3);
        assert_eq!(digit_count(134176769, 25), 6);
        assert_eq!(digit_count(18014398492704769, 1 << 15), 4);
        assert_eq!(digit_count(18014398492704769, 25), 12);
    }

    #[test]
    fn centered_lift() {
        assert_eq!(centered(0, 17), 0);
        assert_eq!(centered(8, 17), 8);
        assert_eq!(centered(9, 17), -8);
        assert_eq!(centered(8, 16), 8);
        assert_eq!(centered(9, 16), -7);
    }
}
