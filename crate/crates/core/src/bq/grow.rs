use serde::{Deserialize, Serialize};

use super::{bq_certify, brace, lattice_strip, BqError, CertReport};
use crate::numeric::{dist2, Coord, Point, Scalar};
use crate::plane::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowBudget {
    /// Candidate point sets to try.
    pub attempts: usize,
    /// Search-node limit for each certification.
    pub branch_limit: Option<u64>,
}

impl Default for GrowBudget {
    fn default() -> Self {
        GrowBudget { attempts: 8, branch_limit: Some(5_000_000) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    UnitEdge,
    /// A single spindle on the diagonal `x`, `y`.
    Spindle,
    /// A braced lattice strip with `y − x = a·e + b·rot60(e)`.
    BracedStrip {
        a: usize,
        b: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct Grown<C> {
    pub points: PointSet<C>,
    pub construction: Construction,
    pub report: CertReport<C>,
}

/// Pairs `a ≥ b ≥ 0`, `a ≥ 1`, with `a² + ab + b² = n`, fewest hops first.
pub fn loeschian_reps(n: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while a * a <= n {
        for b in 0..=a {
            if a * a + a * b + b * b == n {
                out.push((a as usize, b as usize));
            }
        }
        a += 1;
    }
    out.sort_by_key(|&(a, b)| (a + b, a));
    out
}

/// Unit vector `e` with `a·e + b·rot60(e) = v`, given `|v|² = a² + ab + b²`.
fn frame<C: Coord>(v: &Point<C>, a: usize, b: usize) -> Result<Point<C>, BqError> {
    let n = C::from_int((a * a + a * b + b * b) as i64);
    let c = C::from_int(a as i64) + C::from_ratio(b as i64, 2);
    let s = C::sqrt3() * C::from_ratio(b as i64, 2);
    let ex = (c.clone() * v.x.clone() + s.clone() * v.y.clone()).checked_div(&n)?;
    let ey = (c * v.y.clone() - s * v.x.clone()).checked_div(&n)?;
    Ok(Point::new(ex, ey))
}

/// A point set containing `x` and `y` whose unit-preserving maps all keep
/// `|x − y|` within ε, with its certificate.
///
/// Candidates are the bare unit edge, then for `|x − y|² = a² + ab + b²`
/// a lattice strip from `x` to `y` with a spindle on every inner edge.
/// With `|x − y|² = 3` the strip is one spindle.
pub fn grow_witness<C: Coord>(x: &Point<C>, y: &Point<C>, epsilon: &Scalar, budget: GrowBudget) -> Result<Grown<C>, BqError> {
    let d2 = dist2(x, y);
    if d2.is_zero_value() {
        return Err(BqError::BadAttach("x and y coincide"));
    }
    let mut candidates: Vec<(Construction, (usize, usize))> = Vec::new();
    if d2.approx_eq(&C::one()) {
        candidates.push((Construction::UnitEdge, (1, 0)));
    } else if let Some(n) = d2.as_integer() {
        for (a, b) in loeschian_reps(n) {
            let kind = if (a, b) == (1, 1) { Construction::Spindle } else { Construction::BracedStrip { a, b } };
            candidates.push((kind, (a, b)));
        }
    }
    let mut best: Option<Scalar> = None;
    for (construction, (a, b)) in candidates.into_iter().take(budget.attempts) {
        let points = match construction {
            Construction::UnitEdge => PointSet::from_points([x.clone(), y.clone()]),
            _ => {
                let e = frame(&y.sub(x), a, b)?;
                brace(&lattice_strip(x, &e, a, b))?
            }
        };
        let report = match bq_certify(&points, x, y, epsilon, budget.branch_limit) {
            Ok(r) => r,
            Err(BqError::BranchLimit(_)) => continue,
            Err(e) => return Err(e),
        };
        if report.certified {
            return Ok(Grown { points, construction, report });
        }
        if best.as_ref().is_none_or(|b| report.max_deviation.cmp_lenient(b).is_lt()) {
            best = Some(report.max_deviation.clone());
        }
    }
    Err(BqError::BudgetExhausted { best_deviation: best.map(Box::new) })
}
