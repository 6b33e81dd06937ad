//! Small integer helpers shared by the closed-form evaluators.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `base^exp` as i128, failing on overflow.
pub fn ipow(base: i128, exp: u32) -> Result<i128> {
    base.checked_pow(exp).ok_or(Error::Overflow("integer power"))
}

/// Exact rational. Only used where closed forms pass through negative
/// powers of p in degenerate parameter sets but still sum to integers.
pub type Frac = Ratio<i128>;

/// `base^exp` for exponents that may be negative.
pub fn pow_frac(base: i128, exp: i64) -> Result<Frac> {
    if exp >= 0 {
        Ok(Frac::from_integer(ipow(base, exp as u32)?))
    } else {
        Ok(Frac::new(1, ipow(base, (-exp) as u32)?))
    }
}

/// The integer value of `f`, if it is one.
pub fn frac_int(f: Frac) -> Option<i128> {
    f.is_integer().then(|| f.to_integer())
}

/// `(-1)^e`.
pub fn sign_pow(e: u32) -> i128 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}
