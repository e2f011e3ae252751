use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use super::NumericError;

pub type Rational = num_rational::BigRational;

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let err = || NumericError::Parse(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

pub(crate) fn rational_sqrt(r: &Rational) -> Result<Rational, NumericError> {
    if r.is_negative() {
        return Err(NumericError::NegativeRadicand);
    }
    match (int_sqrt(r.numer()), int_sqrt(r.denom())) {
        (Some(n), Some(d)) => Ok(Rational::new(n, d)),
        _ => Err(NumericError::NotRepresentable),
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
