use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumericError;

/// Comparison tolerance used when none is configured.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A double with the tolerance τ that governs its comparisons.
///
/// Binary operations keep the larger of the two tolerances, so constants
/// (τ = 0) pick up the tolerance of the data they are combined with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatScalar {
    pub value: f64,
    pub tol: f64,
}

impl FloatScalar {
    pub fn new(value: f64, tol: f64) -> Self {
        FloatScalar { value, tol }
    }

    pub fn exact_constant(value: f64) -> Self {
        FloatScalar { value, tol: 0.0 }
    }

    pub fn sign(&self) -> Ordering {
        if self.value.abs() <= self.tol {
            Ordering::Equal
        } else if self.value > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, NumericError> {
        if rhs.value == 0.0 || rhs.sign() == Ordering::Equal && rhs.tol > 0.0 {
            return Err(NumericError::DivisionByZero);
        }
        Ok(FloatScalar::new(self.value / rhs.value, self.tol.max(rhs.tol)))
    }

    pub fn sqrt(&self) -> Result<Self, NumericError> {
        match self.sign() {
            Ordering::Less => Err(NumericError::NegativeRadicand),
            Ordering::Equal => Ok(FloatScalar::new(0.0, self.tol)),
            Ordering::Greater => Ok(FloatScalar::new(self.value.sqrt(), self.tol)),
        }
    }
}

impl Add for FloatScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        FloatScalar::new(self.value + rhs.value, self.tol.max(rhs.tol))
    }
}

impl Sub for FloatScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        FloatScalar::new(self.value - rhs.value, self.tol.max(rhs.tol))
    }
}

impl Mul for FloatScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        FloatScalar::new(self.value * rhs.value, self.tol.max(rhs.tol))
    }
}

impl Neg for FloatScalar {
    type Output = Self;
    fn neg(self) -> Self {
        FloatScalar::new(-self.value, self.tol)
    }
}

impl fmt::Display for FloatScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FloatScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value)
    }
}

impl<'de> Deserialize<'de> for FloatScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Ok(FloatScalar::new(v, super::DEFAULT_TOLERANCE))
    }
}
