use proptest::prelude::*;

use rigidlab::bq::{bq_certify, default_attach, gadget, CertReport, GadgetKind, GrowBudget};
use rigidlab::numeric::{Biquad, Coord, FloatScalar, Point, Scalar};
use rigidlab::phi::{enumerate_phi, free_edges, orientation_from_bits, PhiEnumeration, PhiMode};
use rigidlab::plane::{lattice_ball, unit_graph, PointSet};
use rigidlab::product::{build_product, run_case1, ProductStruct};
use rigidlab::relations::{is_rigid, RelStruct};

fn spindle<C: Coord>() -> (PointSet<C>, Point<C>, Point<C>) {
    let attach: Vec<Point<C>> = default_attach(GadgetKind::MoserSpindle).into_iter().map(|p| p.with_tolerance(1e-9)).collect();
    let g = gadget::<C>(GadgetKind::MoserSpindle, &attach).unwrap();
    let (a, d) = (g.point("A").unwrap().clone(), g.point("D").unwrap().clone());
    (g.points, a, d)
}

#[test]
fn backends_agree_on_the_spindle() {
    let (t, a, d) = spindle::<Biquad>();
    let exact = bq_certify(&t, &a, &d, &Scalar::zero_exact(), None).unwrap();
    let (tf, af, df) = spindle::<FloatScalar>();
    let eps = Scalar::Float(FloatScalar::new(0.0, 1e-9));
    let float = bq_certify(&tf, &af, &df, &eps, None).unwrap();
    assert_eq!(exact.maps, float.maps);
    assert!(exact.certified && float.certified);
    assert!(float.max_deviation.to_f64() < 1e-9);
}

#[test]
fn float_gadget_needs_a_tolerance() {
    let attach = default_attach::<FloatScalar>(GadgetKind::MoserSpindle);
    assert!(gadget(GadgetKind::MoserSpindle, &attach).is_err());
}

#[test]
fn reports_survive_json() {
    let g = gadget::<Biquad>(GadgetKind::Rhombus, &default_attach(GadgetKind::Rhombus)).unwrap();
    let r = bq_certify(&g.points, g.point("A").unwrap(), g.point("D").unwrap(), &Scalar::zero_exact(), None).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<CertReport<Biquad>>(&text).unwrap(), r);
}

#[test]
fn lattice_product_elements_are_distinct_orbits() {
    // Two members over the radius-1 ball: the product has no
    // endomorphism besides the identity.
    let ball = lattice_ball::<Biquad>(1, true);
    let members = vec![orientation_from_bits(&ball, |_| false).unwrap(), orientation_from_bits(&ball, |k| k == 2).unwrap()];
    let p: ProductStruct<Biquad> = build_product(&ball, members).unwrap();
    assert_eq!(p.structure().n(), 14);
    assert!(is_rigid(p.structure()));
}

#[test]
fn case1_between_lattice_neighbours() {
    let ball = lattice_ball::<Biquad>(1, true);
    let s = orientation_from_bits(&ball, |k| k % 2 == 1).unwrap();
    let x = Point::new(Biquad::zero(), Biquad::zero());
    let y = ball[2].clone();
    let c = run_case1(&ball, &[s], &x, &y, 0, GrowBudget::default()).unwrap();
    assert!(c.outcome.is_valid());
    assert_ne!(c.witness.src, c.witness.tgt);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ball_sizes(r in 0u32..4) {
        let ball = lattice_ball::<Biquad>(r, false);
        let n = r as usize;
        prop_assert_eq!(ball.len(), 3 * n * n + 3 * n + 1);
    }

    #[test]
    fn phi_count_matches_edges(r in 1u32..3) {
        let ball = lattice_ball::<Biquad>(r, true);
        let m = unit_graph(&ball).edges().len();
        prop_assert_eq!(free_edges(&ball).unwrap().len(), m - 3);
        prop_assert_eq!(enumerate_phi(&ball, PhiMode::Count).unwrap(), PhiEnumeration::Count(1u128 << (m - 3)));
    }

    #[test]
    fn relation_json_round_trip(n in 1usize..6, mask in any::<u64>()) {
        let s = RelStruct::from_mask(n, mask);
        let back: RelStruct = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}
