use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, rational_sqrt, rational_to_f64, Rational};
use super::NumericError;

/// An ordered field with exact arithmetic and an exact sign.
pub trait ExactField:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> Ordering;
    fn inv(&self) -> Result<Self, NumericError>;
    /// Non-negative square root inside the field.
    fn sqrt(&self) -> Result<Self, NumericError>;
    fn to_f64(&self) -> f64;
}

impl ExactField for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn inv(&self) -> Result<Self, NumericError> {
        if Zero::is_zero(self) {
            Err(NumericError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn sqrt(&self) -> Result<Self, NumericError> {
        rational_sqrt(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// The square-free positive integer adjoined by a [`Quadratic`] extension.
pub trait Radicand: Clone + Copy + fmt::Debug + Default + PartialEq + Eq + Hash + Send + Sync + 'static {
    const VALUE: i64;
    const SYMBOL: &'static str;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Root3;
impl Radicand for Root3 {
    const VALUE: i64 = 3;
    const SYMBOL: &'static str = "√3";
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Root11;
impl Radicand for Root11 {
    const VALUE: i64 = 11;
    const SYMBOL: &'static str = "√11";
}

/// `a + b·√r` over a base field `K`, with `√r ∉ K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadratic<K, R> {
    a: K,
    b: K,
    _root: PhantomData<R>,
}

/// ℚ(√3): the coordinate field of the triangular lattice.
pub type QScalar = Quadratic<Rational, Root3>;

/// ℚ(√3)(√11): the exact backend's coordinate field.
pub type Biquad = Quadratic<QScalar, Root11>;

impl<K: ExactField, R: Radicand> Quadratic<K, R> {
    pub fn new(a: K, b: K) -> Self {
        Quadratic { a, b, _root: PhantomData }
    }

    pub fn from_base(a: K) -> Self {
        Self::new(a, K::zero())
    }

    /// The rational part.
    pub fn a(&self) -> &K {
        &self.a
    }

    /// The coefficient of the adjoined root.
    pub fn b(&self) -> &K {
        &self.b
    }

    fn radicand() -> K {
        K::from_rational(Rational::from_integer(R::VALUE.into()))
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// `a² − r·b²`, the field norm down to `K`.
    pub fn norm(&self) -> K {
        self.a.clone() * self.a.clone() - Self::radicand() * self.b.clone() * self.b.clone()
    }

    /// Embeds `self` in `Quadratic<Self, S>`.
    pub fn lift<S: Radicand>(self) -> Quadratic<Self, S> {
        Quadratic::from_base(self)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, NumericError> {
        Ok(self.clone() * rhs.inv()?)
    }

    /// Square root when it lies in the field.
    ///
    /// For `u = a + b√r` with `b ≠ 0`, a root `c + d√r` satisfies
    /// `c² = (a ± √N(u)) / 2` and `d = b / 2c`; both signs are tried.
    fn sqrt_impl(&self) -> Result<Self, NumericError> {
        match self.signum() {
            Ordering::Less => return Err(NumericError::NegativeRadicand),
            Ordering::Equal => return Ok(Self::zero_value()),
            Ordering::Greater => {}
        }
        let two = K::from_rational(Rational::from_integer(2.into()));
        let half = two.inv()?;
        let mut candidates = Vec::new();
        if self.b.is_zero() {
            if let Ok(c) = self.a.sqrt() {
                candidates.push(Self::new(c, K::zero()));
            }
            if let Ok(d) = (self.a.clone() * Self::radicand().inv()?).sqrt() {
                candidates.push(Self::new(K::zero(), d));
            }
        } else {
            let m = match self.norm().sqrt() {
                Ok(m) => m,
                Err(NumericError::NegativeRadicand) | Err(NumericError::NotRepresentable) => return Err(NumericError::NotRepresentable),
                Err(e) => return Err(e),
            };
            for c2 in [(self.a.clone() + m.clone()) * half.clone(), (self.a.clone() - m.clone()) * half.clone()] {
                if let Ok(c) = c2.sqrt() {
                    if c.is_zero() {
                        continue;
                    }
                    let d = self.b.clone() * (two.clone() * c.clone()).inv()?;
                    candidates.push(Self::new(c, d));
                }
            }
        }
        for s in candidates {
            let s = if s.signum() == Ordering::Less { -s } else { s };
            if s.clone() * s.clone() == *self {
                return Ok(s);
            }
        }
        Err(NumericError::NotRepresentable)
    }

    fn zero_value() -> Self {
        Self::new(K::zero(), K::zero())
    }
}

impl QScalar {
    /// `(an/ad) + (bn/bd)·√3`.
    pub fn from_ratios(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        Self::new(Rational::new(an.into(), ad.into()), Rational::new(bn.into(), bd.into()))
    }

    pub fn rational_parts(&self) -> (String, String) {
        (format_rational(&self.a), format_rational(&self.b))
    }
}

impl Biquad {
    /// `a + b√3 + c√11 + d√33`.
    pub fn from_parts(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self::new(QScalar::new(a, b), QScalar::new(c, d))
    }
}

impl<K: ExactField, R: Radicand> ExactField for Quadratic<K, R> {
    fn zero() -> Self {
        Self::zero_value()
    }
    fn one() -> Self {
        Self::new(K::one(), K::zero())
    }
    fn from_rational(r: Rational) -> Self {
        Self::from_base(K::from_rational(r))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn signum(&self) -> Ordering {
        let sa = self.a.signum();
        let sb = self.b.signum();
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (s, t) if s == t => s,
            _ => {
                // Opposite signs: the term with the larger square wins.
                let diff = self.a.clone() * self.a.clone() - Self::radicand() * self.b.clone() * self.b.clone();
                match diff.signum() {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
    fn inv(&self) -> Result<Self, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let n = self.norm().inv()?;
        Ok(Self::new(self.a.clone() * n.clone(), -(self.b.clone() * n)))
    }
    fn sqrt(&self) -> Result<Self, NumericError> {
        self.sqrt_impl()
    }
    fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (R::VALUE as f64).sqrt()
    }
}

impl<K: ExactField, R: Radicand> Add for Quadratic<K, R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl<K: ExactField, R: Radicand> Sub for Quadratic<K, R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl<K: ExactField, R: Radicand> Mul for Quadratic<K, R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let ac = self.a.clone() * rhs.a.clone();
        let bd = self.b.clone() * rhs.b.clone();
        let ad = self.a * rhs.b;
        let bc = self.b * rhs.a;
        Self::new(ac + Self::radicand() * bd, ad + bc)
    }
}

impl<K: ExactField, R: Radicand> Neg for Quadratic<K, R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

/// Panics on a zero divisor; use [`Quadratic::checked_div`] to handle it.
impl<K: ExactField, R: Radicand> Div for Quadratic<K, R> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by zero")
    }
}

macro_rules! ref_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<'a, K: ExactField, R: Radicand> $tr<&'a Quadratic<K, R>> for &'a Quadratic<K, R> {
            type Output = Quadratic<K, R>;
            fn $m(self, rhs: &'a Quadratic<K, R>) -> Quadratic<K, R> {
                $tr::$m(self.clone(), rhs.clone())
            }
        }
    )*};
}
ref_ops!(Add add, Sub sub, Mul mul, Div div);

impl<K: ExactField, R: Radicand> PartialOrd for Quadratic<K, R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<K: ExactField, R: Radicand> Ord for Quadratic<K, R> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl<K: ExactField, R: Radicand> fmt::Display for Quadratic<K, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = self.b.to_string();
        let coef = match b.as_str() {
            "1" => String::new(),
            "-1" => "-".into(),
            _ if b[1..].contains([' ', '/', '-', '+']) => format!("({b})"),
            _ => b,
        };
        let a = self.a.to_string();
        let a = if a.contains(' ') { format!("({a})") } else { a };
        match (self.a.is_zero(), coef.strip_prefix('-')) {
            (true, _) => write!(f, "{coef}{}", R::SYMBOL),
            (false, Some(rest)) => write!(f, "{a} - {rest}{}", R::SYMBOL),
            (false, None) => write!(f, "{a} + {coef}{}", R::SYMBOL),
        }
    }
}
