//! Exact rational scalars.
//!
//! All parameter values and coefficients in this crate are held as
//! arbitrary-precision rationals in lowest terms; no floating point enters
//! any computation path. `Scalar` is [`num_rational::BigRational`], which
//! already maintains the canonical reduced form on every operation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms.
pub type Scalar = BigRational;

/// `n` as a scalar.
pub fn s_int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d` as a scalar. Panics if `d == 0`.
pub fn s_ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse an exact rational from an integer or `p/q` string.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("invalid rational {:?}: {}", text, e)))
}

/// `base^exp` for any integer exponent.
///
/// Panics if `base` is zero and `exp` is negative; call sites guard this
/// through the genericity certificate.
pub fn pow_int(base: &Scalar, exp: i64) -> Scalar {
    if exp == 0 {
        return Scalar::one();
    }
    if exp < 0 {
        assert!(
            !base.is_zero(),
            "zero base with negative exponent {}",
            exp
        );
        return pow_int(&base.recip(), -exp);
    }
    let mut acc = Scalar::one();
    let mut sq = base.clone();
    let mut e = exp as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// `10^-k`, the usual shape for tolerances.
pub fn ten_pow_neg(k: u32) -> Scalar {
    pow_int(&s_int(10), -(k as i64))
}

/// A short human-readable rendering: exact value plus a decimal approximation.
pub fn approx_str(s: &Scalar) -> String {
    match s.to_f64() {
        Some(f) => format!("{} (~{:.3e})", s, f),
        None => s.to_string(),
    }
}

/// `|s|`.
pub fn s_abs(s: &Scalar) -> Scalar {
    s.abs()
}
