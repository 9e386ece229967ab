//! Arbitrary-precision rational coefficients and their canonical text form.
//!
//! The canonical form is `p/q` in lowest terms with `q > 0`, shortened to `p`
//! when `q = 1`; a minus sign may appear on the numerator only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field: arbitrary-precision rationals, always reduced.
pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d = 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form of a rational.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, or `p/q` with `q > 0`. The value is reduced on input;
/// a signed or zero denominator is rejected.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("malformed rational `{text}`"));
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer = parse_int(num_text, true).ok_or_else(bad)?;
    let denom = match den_text {
        Some(d) => parse_int(d, false).ok_or_else(bad)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rat::new(numer, denom))
}

fn parse_int(text: &str, allow_sign: bool) -> Option<BigInt> {
    let (digits, negative) = match text.strip_prefix('-') {
        Some(rest) if allow_sign => (rest, true),
        Some(_) => return None,
        None => (text, false),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let value: BigInt = digits.parse().ok()?;
    Some(if negative { -value } else { value })
}

/// `x^k` for a (possibly negative) machine-integer exponent.
pub fn pow_i(x: &Rat, k: i64) -> Rat {
    if k == 0 {
        return Rat::one();
    }
    let mut base = if k < 0 { x.recip() } else { x.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = Rat::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// True if `x` is positive.
pub fn is_positive(x: &Rat) -> bool {
    x.numer().is_positive()
}
