//! Helpers around `BigRational`: parsing, "p/q" formatting, exact square roots
//! and float conversions that stay finite for very large values.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Error returned when a string is not of the form `p`, `p/q` with `q != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a rational number: {:?}", self.input)
    }
}

impl std::error::Error for ParseRationalError {}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Always emits `p/q`, including `q = 1`.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root when `q` is the square of a rational.
pub fn sqrt_exact(q: &BigRational) -> Option<BigRational> {
    let n = int_sqrt_exact(q.numer())?;
    let d = int_sqrt_exact(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn ln_bigint(n: &BigInt) -> f64 {
    debug_assert!(n.sign() == Sign::Plus);
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational, finite even past the `f64` range.
pub fn ln(q: &BigRational) -> f64 {
    assert!(q.is_positive(), "ln of non-positive rational");
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// `acosh(q)` for an exact `q >= 1`.
pub fn acosh(q: &BigRational) -> f64 {
    let x = to_f64(q);
    if x.is_finite() && x < 1e150 {
        if x <= 1.0 {
            return 0.0;
        }
        x.acosh()
    } else {
        // acosh x = ln(2x) - 1/(4x^2) - ...; the tail is below f64 resolution here.
        ln(q) + std::f64::consts::LN_2
    }
}

/// `asinh(q)` for an exact `q`, finite past the `f64` range.
pub fn asinh(q: &BigRational) -> f64 {
    let x = to_f64(q);
    if x.is_finite() && x.abs() < 1e150 {
        x.asinh()
    } else {
        let v = ln(&q.abs()) + std::f64::consts::LN_2;
        if q.is_negative() {
            -v
        } else {
            v
        }
    }
}

pub fn max_abs<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    it.into_iter()
        .map(|q| q.abs())
        .fold(BigRational::zero(), |m, q| if q > m { q } else { m })
}

pub fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Formats a float with 12 significant digits. Fixed notation for moderate
/// magnitudes, scientific otherwise.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}
