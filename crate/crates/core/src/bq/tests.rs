use super::*;
use crate::numeric::{Biquad, ExactField, FloatScalar, QScalar};
use crate::plane::{lattice_ball, triangle_set, unit_graph};
use proptest::prelude::*;

type B = Biquad;

fn zero() -> Scalar {
    Scalar::zero_exact()
}

fn exact(n: i64) -> Scalar {
    Scalar::Exact(<B as Coord>::from_int(n))
}

fn dflt(kind: GadgetKind) -> Gadget<B> {
    gadget(kind, &default_attach(kind)).unwrap()
}

fn maps_of(ps: &PointSet<B>) -> UnitMaps<B> {
    let o = placement_order(ps, &ps[0], &ps[1]).unwrap();
    enumerate_unit_maps(ps, &o, None).unwrap()
}

fn pt(x: (i64, i64), y: (i64, i64, i64, i64)) -> Point<B> {
    let q = |n: i64, d: i64, m: i64, e: i64| QScalar::from_ratios(n, d, m, e).lift();
    Point::new(q(x.0, x.1, 0, 1), q(y.0, y.1, y.2, y.3))
}

#[test]
fn placement_examples() {
    let t = triangle_set::<B>();
    let o = placement_order(&t, &t[0], &t[1]).unwrap();
    assert_eq!(o.vertices(), vec![0, 1, 2]);
    let r = dflt(GadgetKind::Rhombus);
    let o = placement_order(&r.points, &r.points[0], &r.points[3]).unwrap();
    assert!(o.is_valid_for(&r.points));
    // Start edge A–B; C sits on A, B and D on the shared edge B–C.
    assert_eq!(o.start, (0, 1));
    assert_eq!(o.steps, vec![Step::Anchor { vertex: 2, anchors: vec![0, 1] }, Step::Anchor { vertex: 3, anchors: vec![1, 2] }]);
    let path = dflt(GadgetKind::Chain(2));
    assert_eq!(placement_order(&path.points, &path.points[0], &path.points[2]), Err(BqError::NotAnchored { vertex: 2 }));
    let s = dflt(GadgetKind::MoserSpindle);
    let o = placement_order(&s.points, &s.points[0], &s.points[3]).unwrap();
    assert!(matches!(o.steps.last(), Some(Step::Hinge { pivot: 0, .. })));
    let split = PointSet::from_points([t[0].clone(), t[1].clone(), pt((5, 1), (0, 1, 0, 1))]);
    assert_eq!(placement_order(&split, &split[0], &split[1]), Err(BqError::NotConnected));
}

#[test]
fn map_counts() {
    assert_eq!(maps_of(&triangle_set()).maps.len(), 1);
    assert_eq!(maps_of(&lattice_ball(1, false)).maps.len(), 11);
    let r = dflt(GadgetKind::Rhombus);
    let m = maps_of(&r.points);
    let diag: Vec<B> = m.maps.iter().map(|f| dist2(&f[0], &f[3])).collect();
    assert_eq!(diag, vec![<B as Coord>::zero(), <B as Coord>::from_int(3)]);
    let s = dflt(GadgetKind::MoserSpindle);
    let m = maps_of(&s.points);
    assert_eq!(m.maps.len(), 4);
    for f in &m.maps {
        assert!(preserves_units(&s.points, f));
        assert_eq!(dist2(&f[0], &f[3]), <B as Coord>::from_int(3));
        assert_eq!(dist2(&f[0], &f[6]), <B as Coord>::from_int(3));
    }
}

#[test]
fn certify_examples() {
    let t = triangle_set::<B>();
    let edge = PointSet::from_points([t[0].clone(), t[1].clone()]);
    let r = bq_certify(&edge, &t[0], &t[1], &zero(), None).unwrap();
    assert!(r.certified && r.maps == 1);

    let rh = dflt(GadgetKind::Rhombus);
    let (a, d) = (rh.point("A").unwrap(), rh.point("D").unwrap());
    let r = bq_certify(&rh.points, a, d, &exact(1), None).unwrap();
    assert!(!r.certified && r.exact);
    assert_eq!(r.max_deviation, Scalar::Exact(<B as Coord>::sqrt3()));
    let fold = r.counterexample.unwrap();
    assert!(fold[0].approx_eq(&fold[3]));

    let sp = dflt(GadgetKind::MoserSpindle);
    let r = bq_certify(&sp.points, sp.point("A").unwrap(), sp.point("D").unwrap(), &zero(), None).unwrap();
    assert!(r.certified && r.exact && r.counterexample.is_none());
    assert_eq!(r.max_deviation, zero());
    assert_eq!((r.maps, r.branch_count), (4, 12));
}

#[test]
fn gadget_shapes() {
    for kind in [GadgetKind::TriangleExtension, GadgetKind::Rhombus, GadgetKind::MoserSpindle, GadgetKind::Chain(3)] {
        let g = dflt(kind);
        assert_eq!(unit_graph(&g.points).edges().len(), kind.edge_count(), "{kind:?}");
        assert_eq!(g.labels.len(), g.points.len());
    }
    assert_eq!(dflt(GadgetKind::Rhombus).points.len(), 4);
    assert_eq!(dflt(GadgetKind::MoserSpindle).points.len(), 7);
    let c = dflt(GadgetKind::Chain(3));
    assert_eq!(c.points.len(), 4);
    assert!(c.points.iter().all(|p| p.y.is_zero_value()));
    assert_eq!(c.points[3], pt((3, 1), (0, 1, 0, 1)));
    let q = gadget::<QScalar>(GadgetKind::MoserSpindle, &default_attach(GadgetKind::MoserSpindle));
    assert_eq!(q, Err(BqError::Numeric(crate::numeric::NumericError::NotRepresentable)));
    let bad = gadget::<B>(GadgetKind::Rhombus, &[Point::origin(), pt((2, 1), (0, 1, 0, 1))]);
    assert!(matches!(bad, Err(BqError::BadAttach(_))));
}

#[test]
fn grow_examples() {
    let o = Point::<B>::origin();
    let g = grow_witness(&o, &pt((1, 1), (0, 1, 0, 1)), &exact(5), GrowBudget::default()).unwrap();
    assert_eq!((g.construction, g.points.len()), (Construction::UnitEdge, 2));

    let d = pt((3, 2), (0, 1, 1, 2));
    let g = grow_witness(&o, &d, &zero(), GrowBudget::default()).unwrap();
    assert_eq!(g.construction, Construction::Spindle);
    let sp = dflt(GadgetKind::MoserSpindle);
    assert!(g.points.is_subset_of(&sp.points) && sp.points.is_subset_of(&g.points));
    assert_eq!(g.report.max_deviation, zero());

    let two = pt((2, 1), (0, 1, 0, 1));
    let g = grow_witness(&o, &two, &zero(), GrowBudget::default()).unwrap();
    assert_eq!(g.construction, Construction::BracedStrip { a: 2, b: 0 });
    // Five strip points and two spindles' worth of extra points.
    assert_eq!(g.points.len(), 11);
    assert!(g.report.certified && g.report.exact);

    let off = pt((1, 2), (0, 1, 0, 1));
    assert_eq!(grow_witness(&o, &off, &zero(), GrowBudget::default()), Err(BqError::BudgetExhausted { best_deviation: None }));
}

#[test]
fn float_backend_spindle() {
    let attach: Vec<_> = default_attach::<FloatScalar>(GadgetKind::MoserSpindle).into_iter().map(|p| p.with_tolerance(1e-9)).collect();
    let g = gadget(GadgetKind::MoserSpindle, &attach).unwrap();
    let eps = Scalar::Float(FloatScalar::new(0.0, 1e-9));
    let r = bq_certify(&g.points, &attach[0], &attach[1], &eps, None).unwrap();
    assert!(r.certified);
    assert_eq!(r.maps, 4);
}

#[test]
fn loeschian() {
    assert_eq!(loeschian_reps(7), vec![(2, 1)]);
    assert_eq!(loeschian_reps(49), vec![(7, 0), (5, 3)]);
    assert!(loeschian_reps(2).is_empty());
    assert_eq!(loeschian_reps(1), vec![(1, 0)]);
}

fn rational_eps() -> impl Strategy<Value = Scalar> {
    (0i64..40, 1i64..10).prop_map(|(n, d)| Scalar::Exact(<B as Coord>::from_ratio(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certification_is_monotone(e1 in rational_eps(), e2 in rational_eps()) {
        let rh = dflt(GadgetKind::Rhombus);
        let (a, d) = (rh.point("A").unwrap(), rh.point("D").unwrap());
        let (lo, hi) = if e1.cmp_lenient(&e2).is_le() { (e1, e2) } else { (e2, e1) };
        let r_lo = bq_certify(&rh.points, a, d, &lo, None).unwrap();
        let r_hi = bq_certify(&rh.points, a, d, &hi, None).unwrap();
        prop_assert!(!r_lo.certified || r_hi.certified);
        let sqrt3 = Scalar::Exact(<B as ExactField>::sqrt(&<B as Coord>::from_int(3)).unwrap());
        prop_assert_eq!(r_lo.certified, lo.cmp_lenient(&sqrt3).is_ge());
        prop_assert_eq!(r_lo.certified, r_lo.counterexample.is_none());
    }

    #[test]
    fn lattice_distances_are_pinned(a in -3i64..=3, b in -3i64..=3) {
        prop_assume!((a, b) != (0, 0));
        let o = Point::<B>::origin();
        let e1 = Point::new(<B as Coord>::one(), <B as Coord>::zero());
        let y = e1.scale(&<B as Coord>::from_int(a)).add(&e1.rot60().scale(&<B as Coord>::from_int(b)));
        let g = grow_witness(&o, &y, &zero(), GrowBudget::default()).unwrap();
        prop_assert!(g.report.certified);
        prop_assert_eq!(g.report.max_deviation, zero());
        prop_assert!(g.points.contains(&o) && g.points.contains(&y));
    }
}
