//! Exact rational scalars and the handful of helpers the rest of the crate
//! needs on top of `num::BigRational`.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational. Always stored in lowest terms.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Nearest `f64`; exact for dyadic rationals within range.
pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// The exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Scalar> {
    Scalar::from_float(x)
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    (num::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// Exact `k`-th root when the result is rational.
pub fn rational_root(x: &Scalar, k: u32) -> Option<Scalar> {
    let n = exact_root(x.numer(), k)?;
    let d = exact_root(x.denom(), k)?;
    Some(Scalar::new(n, d))
}

/// Exact non-negative square root when rational.
pub fn rational_sqrt(x: &Scalar) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    rational_root(x, 2)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseScalarError(pub String);

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse(s: &str) -> Result<Scalar, ParseScalarError> {
    let t = s.trim();
    let err = || ParseScalarError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Scalar::new(n, d));
    }
    if let Some((whole, fracpart)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fracpart);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num::pow(BigInt::from(10), fracpart.len());
        let v = Scalar::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    t.parse::<BigInt>().map(Scalar::from_integer).map_err(|_| err())
}

/// Canonical `"p/q"` (or `"p"` for integers) rendering used in every file format.
pub fn format(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Display adapter for `Scalar` slices, e.g. `[1, -1/2, 0]`.
pub struct Row<'a>(pub &'a [Scalar]);

impl fmt::Display for Row<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format(x))?;
        }
        write!(f, "]")
    }
}
