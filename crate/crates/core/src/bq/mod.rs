//! Unit-distance-preserving maps of finite plane point sets: placement,
//! exhaustive enumeration up to isometry, distance certificates, gadgets,
//! and a search for point sets that pin a given distance.

mod enumerate;
mod gadgets;
mod grow;
mod placement;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::{enumerate_unit_maps, preserves_units, UnitMaps};
pub use gadgets::{brace, default_attach, gadget, lattice_strip, moser_spindle, Gadget, GadgetKind};
pub use grow::{grow_witness, loeschian_reps, Construction, GrowBudget, Grown};
pub use placement::{placement_order, PlacementOrder, Step};

use crate::numeric::{dist2, Coord, FloatScalar, NumericError, Point, Scalar, DEFAULT_TOLERANCE};
use crate::plane::PointSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BqError {
    #[error("vertex {vertex} cannot be given two anchors")]
    NotAnchored { vertex: usize },
    #[error("vertex {vertex} moves freely in some placement")]
    Flexible { vertex: usize },
    #[error("unit graph is not connected")]
    NotConnected,
    #[error("x or y is not in the point set")]
    MissingPoint,
    #[error("placement order does not fit the point set")]
    InvalidOrder,
    #[error("more than {0} search nodes")]
    BranchLimit(u64),
    #[error("bad attachment: {0}")]
    BadAttach(&'static str),
    #[error("no certified point set within budget (best deviation {best_deviation:?})")]
    BudgetExhausted { best_deviation: Option<Box<Scalar>> },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Outcome of checking that every unit-preserving map of `T` moves `|x − y|`
/// by at most ε.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct CertReport<C> {
    pub certified: bool,
    pub epsilon: Scalar,
    pub max_deviation: Scalar,
    /// Whether every deviation was computed in exact arithmetic.
    pub exact: bool,
    pub x: usize,
    pub y: usize,
    pub maps: usize,
    pub branch_count: u64,
    pub pruned_contradictions: u64,
    /// The lexicographically least map exceeding ε.
    pub counterexample: Option<Vec<Point<C>>>,
}

/// `||f(x) − f(y)| − |x − y||` from the two squared distances. Falls back
/// to floating point when a root leaves the backend's field.
pub fn deviation<C: Coord>(before: &C, after: &C) -> (Scalar, bool) {
    if before.approx_eq(after) {
        return (C::zero().to_scalar(), true);
    }
    match (before.sqrt(), after.sqrt()) {
        (Ok(a), Ok(b)) => ((b - a).abs().to_scalar(), true),
        _ => {
            let v = (after.to_f64().max(0.0).sqrt() - before.to_f64().max(0.0).sqrt()).abs();
            let tol = before.tolerance().max(after.tolerance()).max(DEFAULT_TOLERANCE);
            (Scalar::Float(FloatScalar::new(v, tol)), false)
        }
    }
}

/// Enumerates the unit-preserving maps of `t` and measures how far each
/// moves `|x − y|`. Deviations compare with ε inclusively.
pub fn bq_certify<C: Coord>(
    t: &PointSet<C>,
    x: &Point<C>,
    y: &Point<C>,
    epsilon: &Scalar,
    limit: Option<u64>,
) -> Result<CertReport<C>, BqError> {
    let (xi, yi) = (t.index_of(x).ok_or(BqError::MissingPoint)?, t.index_of(y).ok_or(BqError::MissingPoint)?);
    let order = placement_order(t, x, y)?;
    let found = enumerate_unit_maps(t, &order, limit)?;
    let before = dist2(x, y);
    let mut max_deviation = C::zero().to_scalar();
    let mut exact = true;
    let mut counterexample = None;
    for f in &found.maps {
        let (dev, ok) = deviation(&before, &dist2(&f[xi], &f[yi]));
        exact &= ok;
        if counterexample.is_none() && dev.cmp_lenient(epsilon).is_gt() {
            counterexample = Some(f.clone());
        }
        if dev.cmp_lenient(&max_deviation).is_gt() {
            max_deviation = dev;
        }
    }
    Ok(CertReport {
        certified: counterexample.is_none(),
        epsilon: epsilon.clone(),
        max_deviation,
        exact,
        x: xi,
        y: yi,
        maps: found.maps.len(),
        branch_count: found.branches,
        pruned_contradictions: found.pruned,
        counterexample,
    })
}

#[cfg(test)]
mod tests;
