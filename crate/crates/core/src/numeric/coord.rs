use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::de::{self, DeserializeOwned};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::float::FloatScalar;
use super::quadratic::{Biquad, ExactField, QScalar};
use super::rational::{parse_rational, Rational};
use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

/// A plane coordinate type. Geometry in this crate is generic over it.
///
/// `sign` is exact on exact backends and τ-tolerant on [`FloatScalar`].
pub trait Coord:
    Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Serialize
    + DeserializeOwned
{
    const BACKEND: Backend;

    fn from_ratio(n: i64, d: i64) -> Self;
    /// √3, exactly when the backend allows.
    fn sqrt3() -> Self;
    fn checked_div(&self, rhs: &Self) -> Result<Self, NumericError>;
    fn sign(&self) -> Ordering;
    fn sqrt(&self) -> Result<Self, NumericError>;
    fn to_f64(&self) -> f64;
    fn to_scalar(&self) -> Scalar;
    /// τ for float values, zero for exact ones.
    fn tolerance(&self) -> f64;

    fn with_tolerance(self, _tau: f64) -> Self {
        self
    }

    fn zero() -> Self {
        Self::from_ratio(0, 1)
    }

    fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn is_zero_value(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }

    fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// The integer this value equals, if any (within τ for floats).
    fn as_integer(&self) -> Option<i64> {
        let r = self.to_f64().round();
        if !r.is_finite() || r.abs() > 1e15 {
            return None;
        }
        let n = r as i64;
        self.approx_eq(&Self::from_int(n)).then_some(n)
    }
}

macro_rules! exact_coord {
    ($ty:ty) => {
        impl Coord for $ty {
            const BACKEND: Backend = Backend::Exact;

            fn from_ratio(n: i64, d: i64) -> Self {
                <$ty as ExactField>::from_rational(Rational::new(n.into(), d.into()))
            }
            fn sqrt3() -> Self {
                <$ty as ExactField>::sqrt(&Self::from_ratio(3, 1)).expect("√3 lies in the field")
            }
            fn checked_div(&self, rhs: &Self) -> Result<Self, NumericError> {
                Ok(self.clone() * rhs.inv()?)
            }
            fn sign(&self) -> Ordering {
                self.signum()
            }
            fn sqrt(&self) -> Result<Self, NumericError> {
                ExactField::sqrt(self)
            }
            fn to_f64(&self) -> f64 {
                ExactField::to_f64(self)
            }
            fn to_scalar(&self) -> Scalar {
                Scalar::Exact(to_biquad(self))
            }
            fn tolerance(&self) -> f64 {
                0.0
            }
        }
    };
}

exact_coord!(QScalar);
exact_coord!(Biquad);

trait ToBiquad {
    fn to_biquad(&self) -> Biquad;
}
impl ToBiquad for QScalar {
    fn to_biquad(&self) -> Biquad {
        Biquad::from_base(self.clone())
    }
}
impl ToBiquad for Biquad {
    fn to_biquad(&self) -> Biquad {
        self.clone()
    }
}
fn to_biquad<T: ToBiquad>(v: &T) -> Biquad {
    v.to_biquad()
}

impl Coord for FloatScalar {
    const BACKEND: Backend = Backend::Float;

    fn from_ratio(n: i64, d: i64) -> Self {
        FloatScalar::exact_constant(n as f64 / d as f64)
    }
    fn sqrt3() -> Self {
        FloatScalar::exact_constant(3f64.sqrt())
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, NumericError> {
        FloatScalar::checked_div(self, rhs)
    }
    fn sign(&self) -> Ordering {
        FloatScalar::sign(self)
    }
    fn sqrt(&self) -> Result<Self, NumericError> {
        FloatScalar::sqrt(self)
    }
    fn to_f64(&self) -> f64 {
        self.value
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
    fn tolerance(&self) -> f64 {
        self.tol
    }
    fn with_tolerance(self, tau: f64) -> Self {
        FloatScalar::new(self.value, tau)
    }
}

/// A backend-tagged number, used where values cross module or file
/// boundaries (reports, tolerances, CLI arguments).
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Scalar {
    Exact(Biquad),
    Float(FloatScalar),
}

impl Scalar {
    pub fn zero_exact() -> Self {
        Scalar::Exact(<Biquad as ExactField>::zero())
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(v) => ExactField::to_f64(v),
            Scalar::Float(v) => v.value,
        }
    }

    /// The value as a float with the given tolerance (keeps the larger τ).
    pub fn to_float(&self, tau: f64) -> FloatScalar {
        match self {
            Scalar::Exact(v) => FloatScalar::new(ExactField::to_f64(v), tau),
            Scalar::Float(v) => FloatScalar::new(v.value, v.tol.max(tau)),
        }
    }

    fn binop(
        &self,
        rhs: &Scalar,
        exact: impl Fn(&Biquad, &Biquad) -> Result<Biquad, NumericError>,
        float: impl Fn(&FloatScalar, &FloatScalar) -> Result<FloatScalar, NumericError>,
    ) -> Result<Scalar, NumericError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => exact(a, b).map(Scalar::Exact),
            (Scalar::Float(a), Scalar::Float(b)) => float(a, b).map(Scalar::Float),
            _ => Err(NumericError::MixedBackend),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        self.binop(rhs, |a, b| Ok(a + b), |a, b| Ok(*a + *b))
    }

    pub fn sub(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        self.binop(rhs, |a, b| Ok(a - b), |a, b| Ok(*a - *b))
    }

    pub fn mul(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        self.binop(rhs, |a, b| Ok(a * b), |a, b| Ok(*a * *b))
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        self.binop(rhs, |a, b| a.checked_div(b), |a, b| a.checked_div(b))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(v) => Scalar::Exact(-v.clone()),
            Scalar::Float(v) => Scalar::Float(-*v),
        }
    }

    pub fn sqrt(&self) -> Result<Scalar, NumericError> {
        match self {
            Scalar::Exact(v) => ExactField::sqrt(v).map(Scalar::Exact),
            Scalar::Float(v) => v.sqrt().map(Scalar::Float),
        }
    }

    /// Ordering of same-backend values.
    pub fn cmp_value(&self, rhs: &Scalar) -> Result<Ordering, NumericError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(a.cmp(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok((*a - *b).sign()),
            _ => Err(NumericError::MixedBackend),
        }
    }

    /// Ordering that tolerates mixed backends by comparing in floating point
    /// under the float operand's τ. Exact pairs compare exactly.
    pub fn cmp_lenient(&self, rhs: &Scalar) -> Ordering {
        match self.cmp_value(rhs) {
            Ok(o) => o,
            Err(_) => {
                let tau = match (self, rhs) {
                    (Scalar::Float(a), _) => a.tol,
                    (_, Scalar::Float(b)) => b.tol,
                    _ => 0.0,
                };
                FloatScalar::new(self.to_f64() - rhs.to_f64(), tau).sign()
            }
        }
    }

    /// Parses a decimal literal containing `.`/`e` (float), or an exact sum
    /// of terms `p/q`, `p/q*sqrt3`, `sqrt11`, `p/q*sqrt33`.
    ///
    /// ```
    /// use rigidlab::numeric::Scalar;
    /// let h = Scalar::parse("1/2*sqrt3", 0.0).unwrap();
    /// assert!((h.to_f64() - 0.75f64.sqrt()).abs() < 1e-15);
    /// assert!(Scalar::parse("0.5", 1e-9).unwrap().backend() == rigidlab::numeric::Backend::Float);
    /// ```
    pub fn parse(s: &str, tau: f64) -> Result<Scalar, NumericError> {
        let t = s.trim();
        if t.contains(['.', 'e', 'E']) {
            let v: f64 = t.parse().map_err(|_| NumericError::Parse(s.to_string()))?;
            return Ok(Scalar::Float(FloatScalar::new(v, tau)));
        }
        let err = || NumericError::Parse(s.to_string());
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in compact.char_indices() {
            if i > 0 && (c == '+' || c == '-') && !compact[..i].ends_with(['/', '*']) {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut parts: [Rational; 4] = std::array::from_fn(|_| <Rational as Zero>::zero());
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            let (coef, slot) = match term.split_once("sqrt") {
                None => (term, 0),
                Some((c, k)) => {
                    let slot = match k {
                        "3" => 1,
                        "11" => 2,
                        "33" => 3,
                        _ => return Err(err()),
                    };
                    let c = c.strip_suffix('*').unwrap_or(c);
                    (c, slot)
                }
            };
            let r = match coef {
                "" | "+" => Rational::from_integer(1.into()),
                "-" => Rational::from_integer((-1).into()),
                c => parse_rational(c)?,
            };
            parts[slot] += r;
        }
        let [a, b, c, d] = parts;
        Ok(Scalar::Exact(Biquad::from_parts(a, b, c, d)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(v) => write!(f, "{v}"),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QScalarRepr {
    a: String,
    b: String,
}

#[derive(Serialize, Deserialize)]
struct BiquadRepr {
    a: String,
    b: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<String>,
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (a, b) = self.rational_parts();
        QScalarRepr { a, b }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = QScalarRepr::deserialize(d)?;
        let a = parse_rational(&r.a).map_err(de::Error::custom)?;
        let b = parse_rational(&r.b).map_err(de::Error::custom)?;
        Ok(QScalar::new(a, b))
    }
}

/// Serialized as `{"a","b"}` (the ℚ(√3) part) plus `"c"`, `"d"` for the
/// coefficients of √11 and √33 when they are non-zero.
impl Serialize for Biquad {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (a, b) = self.a().rational_parts();
        let (c, d) = if ExactField::is_zero(self.b()) {
            (None, None)
        } else {
            let (c, d) = self.b().rational_parts();
            (Some(c), Some(d))
        };
        BiquadRepr { a, b, c, d }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Biquad {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = BiquadRepr::deserialize(d)?;
        let p = |s: &Option<String>| -> Result<Rational, D::Error> {
            match s {
                Some(s) => parse_rational(s).map_err(de::Error::custom),
                None => Ok(<Rational as Zero>::zero()),
            }
        };
        let a = parse_rational(&r.a).map_err(de::Error::custom)?;
        let b = parse_rational(&r.b).map_err(de::Error::custom)?;
        Ok(Biquad::from_parts(a, b, p(&r.c)?, p(&r.d)?))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(v) => v.serialize(s),
            Scalar::Float(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        #[allow(clippy::large_enum_variant)]
        enum Repr {
            Num(f64),
            Obj(Biquad),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Num(v) => Scalar::Float(FloatScalar::new(v, super::DEFAULT_TOLERANCE)),
            Repr::Obj(b) => Scalar::Exact(b),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_radical_sums() {
        let v = Scalar::parse("-3/2 + 1/2*sqrt3 - sqrt11", 0.0).unwrap();
        let want = Biquad::from_parts(
            Rational::new((-3).into(), 2.into()),
            Rational::new(1.into(), 2.into()),
            Rational::from_integer((-1).into()),
            <Rational as Zero>::zero(),
        );
        assert_eq!(v, Scalar::Exact(want));
        assert!(Scalar::parse("sqrt5", 0.0).is_err());
        assert!(Scalar::parse("", 0.0).is_err());
    }

    #[test]
    fn mixed_backend_arithmetic_raises() {
        let e = Scalar::parse("1/2", 1e-9).unwrap();
        let f = Scalar::parse("0.5", 1e-9).unwrap();
        assert_eq!(e.add(&f), Err(NumericError::MixedBackend));
        assert_eq!(e.cmp_lenient(&f), Ordering::Equal);
        assert!(e.add(&e).unwrap().is_exact());
    }

    #[test]
    fn float_tolerance() {
        let a = FloatScalar::new(1.0, 1e-9);
        let b = FloatScalar::new(1.0 + 5e-10, 1e-9);
        assert!(a.approx_eq(&b));
        let c = FloatScalar::new(1.0 + 5e-9, 1e-9);
        assert!(!a.approx_eq(&c));
        assert_eq!(a.checked_div(&FloatScalar::new(0.0, 1e-9)), Err(NumericError::DivisionByZero));
    }

    #[test]
    fn json_shapes() {
        let h = QScalar::from_ratios(1, 2, -3, 4);
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"a":"1/2","b":"-3/4"}"#);
        let b = Biquad::from_base(h.clone());
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"a":"1/2","b":"-3/4"}"#);
        let back: Biquad = serde_json::from_str(r#"{"a":"1/2","b":"-3/4"}"#).unwrap();
        assert_eq!(back, b);
        let s: Scalar = serde_json::from_str("0.25").unwrap();
        assert_eq!(s.backend(), Backend::Float);
    }
}
