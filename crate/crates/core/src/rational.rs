//! Rational helpers on top of `num-rational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `"p/q"` rendering with `q > 0` and `gcd(p, q) = 1`.
pub fn format(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.25"`.
pub fn parse(s: &str) -> Result<Q> {
    let bad = || Error::InvalidRational(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(p, q));
    }
    if let Some((whole, fractional)) = t.split_once('.') {
        if fractional.is_empty() || !fractional.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = fractional.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fractional.len());
        let magnitude = Q::new(whole * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(p))
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a nonnegative rational, when it exists.
pub fn sqrt_exact(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// `q^e` for a signed exponent; `q` must be nonzero when `e < 0`.
pub fn powi(q: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

pub fn factorial(k: usize) -> Q {
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= j;
    }
    Q::from_integer(acc)
}

pub fn binomial(k: usize, j: usize) -> Q {
    if j > k {
        return Q::zero();
    }
    factorial(k) / (factorial(j) * factorial(k - j))
}

/// `(m-1)!!` for even `m`, i.e. the `m`-th moment of a unit Gaussian.
pub fn double_factorial_odd(m: u32) -> Q {
    let mut acc = BigInt::one();
    let mut j = m as i64 - 1;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    Q::from_integer(acc)
}
