use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coord::Coord;
use super::NumericError;

/// A plane point; both coordinates share the backend `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct Point<C> {
    pub x: C,
    pub y: C,
}

impl<C: Coord> Point<C> {
    pub fn new(x: C, y: C) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(C::zero(), C::zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Point::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Point::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }

    pub fn scale(&self, k: &C) -> Self {
        Point::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    pub fn dot(&self, o: &Self) -> C {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    pub fn cross(&self, o: &Self) -> C {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    /// Quarter turn counter-clockwise.
    pub fn perp(&self) -> Self {
        Point::new(-self.y.clone(), self.x.clone())
    }

    /// Rotation by +60°.
    pub fn rot60(&self) -> Self {
        let h = C::from_ratio(1, 2);
        let s = C::sqrt3() * h.clone();
        Point::new(self.x.clone() * h.clone() - self.y.clone() * s.clone(), self.x.clone() * s + self.y.clone() * h)
    }

    pub fn mirror_y(&self) -> Self {
        Point::new(self.x.clone(), -self.y.clone())
    }

    pub fn norm2(&self) -> C {
        self.dot(self)
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.x.approx_eq(&o.x) && self.y.approx_eq(&o.y)
    }

    /// Lexicographic order by `(x, y)`.
    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        self.x.cmp_value(&o.x).then_with(|| self.y.cmp_value(&o.y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn with_tolerance(self, tau: f64) -> Self {
        Point::new(self.x.with_tolerance(tau), self.y.with_tolerance(tau))
    }
}

impl<C: Coord> fmt::Display for Point<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Squared Euclidean distance.
pub fn dist2<C: Coord>(p: &Point<C>, q: &Point<C>) -> C {
    p.sub(q).norm2()
}

/// `|p − q| = 1`, exactly or within τ.
pub fn is_unit<C: Coord>(p: &Point<C>, q: &Point<C>) -> bool {
    dist2(p, q).approx_eq(&C::one())
}

/// Intersection of the circles `|z − c1|² = r1sq` and `|z − c2|² = r2sq`.
///
/// Returns zero, one (tangent) or two points in lexicographic order. On an
/// exact backend the offset along the radical line needs a square root; when
/// that root leaves the field the result is `NotRepresentable`.
pub fn circle_intersect<C: Coord>(c1: &Point<C>, r1sq: &C, c2: &Point<C>, r2sq: &C) -> Result<Vec<Point<C>>, NumericError> {
    let delta = c2.sub(c1);
    let d2 = delta.norm2();
    if d2.is_zero_value() {
        return Err(NumericError::ConcentricCircles);
    }
    // Foot of the radical line at c1 + t·delta; offset ±h·perp(delta).
    let t = (r1sq.clone() - r2sq.clone() + d2.clone()).checked_div(&(C::from_int(2) * d2.clone()))?;
    let h2 = r1sq.checked_div(&d2)? - t.square();
    let foot = c1.add(&delta.scale(&t));
    match h2.sign() {
        Ordering::Less => Ok(Vec::new()),
        Ordering::Equal => Ok(vec![foot]),
        Ordering::Greater => {
            let h = h2.sqrt()?;
            let off = delta.perp().scale(&h);
            let mut pts = vec![foot.add(&off), foot.sub(&off)];
            pts.sort_by(|a, b| a.lex_cmp(b));
            Ok(pts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{Biquad, FloatScalar, QScalar};
    use proptest::prelude::*;

    type P = Point<QScalar>;

    fn pt(x: (i64, i64, i64, i64), y: (i64, i64, i64, i64)) -> P {
        Point::new(QScalar::from_ratios(x.0, x.1, x.2, x.3), QScalar::from_ratios(y.0, y.1, y.2, y.3))
    }

    fn int(x: i64, y: i64) -> P {
        pt((x, 1, 0, 1), (y, 1, 0, 1))
    }

    fn one() -> QScalar {
        QScalar::one()
    }

    #[test]
    fn base_triangle_is_equilateral() {
        let p0 = int(0, 0);
        let p1 = int(1, 0);
        let p2 = pt((1, 2, 0, 1), (0, 1, 1, 2));
        assert_eq!(dist2(&p0, &p1), one());
        assert_eq!(dist2(&p0, &p2), one());
        assert_eq!(dist2(&p1, &p2), one());
        assert!(is_unit(&p1, &p2));
    }

    #[test]
    fn unit_circle_cases() {
        let apexes = circle_intersect(&int(0, 0), &one(), &int(1, 0), &one()).unwrap();
        assert_eq!(apexes, vec![pt((1, 2, 0, 1), (0, 1, -1, 2)), pt((1, 2, 0, 1), (0, 1, 1, 2))]);
        let tangent = circle_intersect(&int(0, 0), &one(), &int(2, 0), &one()).unwrap();
        assert_eq!(tangent, vec![int(1, 0)]);
        assert!(circle_intersect(&int(0, 0), &one(), &int(3, 0), &one()).unwrap().is_empty());
        assert_eq!(circle_intersect(&int(0, 0), &one(), &int(0, 0), &one()), Err(NumericError::ConcentricCircles));
    }

    #[test]
    fn spindle_hinge_needs_root_eleven() {
        // |AD|² = 3, intersect circle(A, 3) with circle(D, 1).
        let a = int(0, 0);
        let d = pt((3, 2, 0, 1), (0, 1, 1, 2));
        let three = QScalar::from_int(3);
        assert_eq!(circle_intersect(&a, &three, &d, &one()), Err(NumericError::NotRepresentable));
        let lift = |p: &P| Point::new(Biquad::from_base(p.x.clone()), Biquad::from_base(p.y.clone()));
        let pts = circle_intersect(&lift(&a), &Biquad::from_int(3), &lift(&d), &Biquad::one()).unwrap();
        assert_eq!(pts.len(), 2);
        for g in &pts {
            assert_eq!(dist2(g, &lift(&a)), Biquad::from_int(3));
            assert_eq!(dist2(g, &lift(&d)), Biquad::one());
        }
    }

    #[test]
    fn float_intersection_within_tolerance() {
        let f = |x: f64, y: f64| Point::new(FloatScalar::new(x, 1e-9), FloatScalar::new(y, 1e-9));
        let r = FloatScalar::new(1.0, 1e-9);
        let pts = circle_intersect(&f(0.0, 0.0), &r, &f(0.7, 0.3), &r).unwrap();
        assert_eq!(pts.len(), 2);
        for p in pts {
            assert!(is_unit(&p, &f(0.0, 0.0)) && is_unit(&p, &f(0.7, 0.3)));
        }
    }

    fn lattice_point() -> impl Strategy<Value = P> {
        (-4i64..5, -4i64..5).prop_map(|(a, b)| {
            let x = QScalar::from_ratios(2 * a + b, 2, 0, 1);
            let y = QScalar::from_ratios(0, 1, b, 2);
            Point::new(x, y)
        })
    }

    proptest! {
        // Unit circles whose centres are 1, √3 or 2 apart always meet inside ℚ(√3).
        #[test]
        fn closed_for_lattice_spacings(c in lattice_point(), dir in 0usize..6, k in 0usize..3) {
            let e1 = int(1, 0);
            let mut v = e1.clone();
            for _ in 0..dir { v = v.rot60(); }
            let step = match k {
                0 => v.clone(),
                1 => v.add(&v.rot60()),
                _ => v.add(&v),
            };
            let c2 = c.add(&step);
            let pts = circle_intersect(&c, &one(), &c2, &one()).unwrap();
            prop_assert!(!pts.is_empty());
            for p in pts {
                prop_assert!(is_unit(&p, &c) && is_unit(&p, &c2));
            }
        }
    }
}
