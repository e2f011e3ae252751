//! Exact and tolerance-based arithmetic for plane coordinates.
//!
//! Two backends share one interface, the [`Coord`] trait:
//!
//! * **Exact**: the tower field ℚ(√3)(√11). [`QScalar`] is ℚ(√3), which holds
//!   the triangular lattice and the base triangle; [`Biquad`] adjoins √11,
//!   the smallest extension that also holds a Moser spindle. Every field
//!   operation is exact; square roots that leave the field raise
//!   [`NumericError::NotRepresentable`].
//! * **Float**: [`FloatScalar`], an `f64` carrying its comparison
//!   tolerance τ.

mod coord;
mod float;
mod point;
mod quadratic;
mod rational;

pub use coord::{Backend, Coord, Scalar};
pub use float::{FloatScalar, DEFAULT_TOLERANCE};
pub use point::{circle_intersect, dist2, is_unit, Point};
pub use quadratic::{Biquad, ExactField, QScalar, Quadratic, Radicand, Root11, Root3};
pub use rational::{format_rational, parse_rational, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeRadicand,
    #[error("value is not representable in the exact field")]
    NotRepresentable,
    #[error("circles are concentric")]
    ConcentricCircles,
    #[error("operands use different numeric backends")]
    MixedBackend,
    #[error("cannot parse number {0:?}")]
    Parse(String),
}
