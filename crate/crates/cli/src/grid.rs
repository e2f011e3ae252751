//! The acceptance grid: eight seeded checks of the library against
//! brute force, independent oracles and exact expectations. `verify-all`
//! writes one artifact per check; the `acceptance` test adds runtime limits
//! and the two-run determinism check.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use rigidlab::bq::{bq_certify, default_attach, enumerate_unit_maps, gadget, placement_order, BqError, GadgetKind, GrowBudget};
use rigidlab::numeric::{Biquad, Coord, Point, Scalar};
use rigidlab::phi::{enumerate_phi, free_edges, observation_verify, orientation_from_bits, Orientation, PhiEnumeration, PhiMode};
use rigidlab::plane::{base_triangle, lattice_ball, PointSet};
use rigidlab::product::{run_case1, run_case2, triangle_distances, trilaterate, ProductError};
use rigidlab::relations::{enumerate_homs, witness_rigidity_check, RelStruct};

use crate::oracle::{brute_force_homs, congruent, naive_unit_maps, NaiveOutcome, P};

type B = Biquad;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub detail: Value,
}

/// A criterion result with its wall-clock time, which never enters
/// artifacts.
#[derive(Clone, Debug)]
pub struct Timed {
    pub criterion: Criterion,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Timed {
    pub fn within_limit(&self) -> bool {
        self.limit.is_none_or(|l| self.elapsed <= l)
    }
}

pub struct Spec {
    pub id: u8,
    pub name: &'static str,
    pub limit_secs: Option<u64>,
    pub run: fn(u64) -> Criterion,
}

pub const CRITERIA: [Spec; 8] = [
    Spec { id: 1, name: "hom engine matches brute force", limit_secs: Some(10), run: hom_oracle },
    Spec { id: 2, name: "homomorphisms fix the triangle and keep unit distances", limit_secs: Some(60), run: observation },
    Spec { id: 3, name: "spindle and rhombus certificates", limit_secs: Some(1), run: certificates },
    Spec { id: 4, name: "unit-map enumeration matches the naive oracle", limit_secs: Some(30), run: unit_map_oracle },
    Spec { id: 5, name: "first-case product witnesses are valid", limit_secs: Some(120), run: case1 },
    Spec { id: 6, name: "second-case product witnesses are valid", limit_secs: Some(120), run: case2 },
    Spec { id: 7, name: "witnessed pairs imply rigidity", limit_secs: None, run: witnessed_implies_rigid },
    Spec { id: 8, name: "trilateration recovers points and rejects bad triples", limit_secs: None, run: trilateration },
];

pub fn run(spec: &Spec, seed: u64) -> Timed {
    let start = Instant::now();
    let criterion = (spec.run)(seed);
    Timed { criterion, elapsed: start.elapsed(), limit: spec.limit_secs.map(Duration::from_secs) }
}

/// Sizes rayon's global pool from `RIGIDLAB_THREADS` when set. Later calls
/// are no-ops.
pub fn configure_threads() {
    if let Some(n) = std::env::var("RIGIDLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn rng(seed: u64, id: u8) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id as u64);
    r
}

fn criterion(id: u8, passed: bool, summary: String, detail: Value) -> Criterion {
    let name = CRITERIA.iter().find(|c| c.id == id).map_or("", |c| c.name).to_string();
    Criterion { id, name, passed, summary, detail }
}

fn random_structure(r: &mut impl Rng, max_n: usize) -> RelStruct {
    let n = r.gen_range(1..=max_n);
    let density = r.gen_range(0.15..0.75);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let chosen: Vec<(usize, usize)> = pairs.into_iter().filter(|_| r.gen_bool(density)).collect();
    RelStruct::new(n, chosen).expect("pairs in range")
}

pub fn hom_oracle(seed: u64) -> Criterion {
    let mut r = rng(seed, 1);
    let cases: Vec<(RelStruct, RelStruct)> = (0..300)
        .map(|k| {
            let src = random_structure(&mut r, 4);
            let dst = if k % 3 == 0 { src.clone() } else { random_structure(&mut r, 4) };
            (src, dst)
        })
        .collect();
    let results: Vec<(usize, bool)> = cases
        .par_iter()
        .map(|(src, dst)| {
            let found = enumerate_homs(src, dst, &[], None).expect("no pins");
            let fast: BTreeSet<Vec<usize>> = found.homs.into_iter().map(|h| h.mapping).collect();
            let slow: BTreeSet<Vec<usize>> = brute_force_homs(src, dst).into_iter().collect();
            (slow.len(), fast == slow && !found.truncated)
        })
        .collect();
    let mismatches: Vec<usize> = results.iter().enumerate().filter(|(_, r)| !r.1).map(|(k, _)| k).collect();
    let total: usize = results.iter().map(|r| r.0).sum();
    criterion(
        1,
        mismatches.is_empty(),
        format!("{} instances, {} homomorphisms, {} mismatches", cases.len(), total, mismatches.len()),
        json!({ "instances": cases.len(), "homomorphisms": total, "mismatches": mismatches }),
    )
}

fn ball1() -> PointSet<B> {
    lattice_ball::<B>(1, true)
}

fn members(base: &PointSet<B>, seed: u64, k: usize) -> Vec<Orientation<B>> {
    match enumerate_phi(base, PhiMode::Sample { seed, k }).expect("base holds the triangle") {
        PhiEnumeration::Members(m) => m,
        PhiEnumeration::Count(_) => unreachable!("sampling lists members"),
    }
}

pub fn observation(seed: u64) -> Criterion {
    let b = ball1();
    let m = members(&b, seed, 40);
    // Every fourth pair compares a member with itself, where the identity
    // at least is a homomorphism.
    let pairs: Vec<(usize, usize)> = (0..20).map(|k| if k % 4 == 0 { (2 * k, 2 * k) } else { (2 * k, 2 * k + 1) }).collect();
    let reports: Vec<(usize, usize)> = pairs
        .par_iter()
        .map(|&(s, z)| {
            let rep = observation_verify(&b, &m[s], &m[z], &b, None).expect("bases agree");
            (rep.homs, rep.violations.len())
        })
        .collect();
    let violations: usize = reports.iter().map(|r| r.1).sum();
    let homs: Vec<usize> = reports.iter().map(|r| r.0).collect();
    criterion(
        2,
        violations == 0,
        format!("{} pairs, {} homomorphisms, {} violations", pairs.len(), homs.iter().sum::<usize>(), violations),
        json!({ "pairs": pairs, "homomorphisms": homs, "violations": violations }),
    )
}

pub fn certificates(_seed: u64) -> Criterion {
    let run = |kind: GadgetKind, eps: Scalar| {
        let g = gadget::<B>(kind, &default_attach(kind)).expect("gadget builds exactly");
        let (a, d) = (g.point("A").unwrap().clone(), g.point("D").unwrap().clone());
        (bq_certify(&g.points, &a, &d, &eps, None).expect("gadget is anchored"), g)
    };
    let (spindle, _) = run(GadgetKind::MoserSpindle, Scalar::zero_exact());
    let (rhombus, g) = run(GadgetKind::Rhombus, Scalar::Exact(<B as Coord>::one()));
    let zero = Scalar::zero_exact();
    let spindle_ok = spindle.certified && spindle.exact && spindle.max_deviation == zero;
    let root3 = Scalar::Exact(B::sqrt3());
    let fold = rhombus.counterexample.as_ref().is_some_and(|f| {
        let (a, d) = (&f[rhombus.x], &f[rhombus.y]);
        a == d && rigidlab::bq::preserves_units(&g.points, f)
    });
    let rhombus_ok = !rhombus.certified && rhombus.exact && rhombus.max_deviation == root3 && fold;
    criterion(
        3,
        spindle_ok && rhombus_ok,
        format!(
            "spindle: certified={} max_deviation={}; rhombus: certified={} max_deviation={} fold={}",
            spindle.certified, spindle.max_deviation, rhombus.certified, rhombus.max_deviation, fold
        ),
        json!({ "spindle": spindle, "rhombus": rhombus }),
    )
}

fn floats<C: Coord>(maps: &[Vec<Point<C>>]) -> Vec<Vec<P>> {
    maps.iter().map(|m| m.iter().map(|p| p.to_f64()).collect()).collect()
}

/// Each list's members match exactly one member of the other.
fn same_classes(a: &[Vec<P>], b: &[Vec<P>]) -> bool {
    a.len() == b.len()
        && a.iter().all(|m| b.iter().filter(|n| congruent(m, n, 1e-6)).count() == 1)
        && b.iter().all(|m| a.iter().filter(|n| congruent(m, n, 1e-6)).count() == 1)
}

pub fn unit_map_oracle(_seed: u64) -> Criterion {
    let mut sets: Vec<(String, PointSet<B>)> = Vec::new();
    for kind in [GadgetKind::TriangleExtension, GadgetKind::Rhombus, GadgetKind::MoserSpindle] {
        sets.push((format!("{kind:?}"), gadget::<B>(kind, &default_attach(kind)).unwrap().points));
    }
    for n in 1..=6 {
        let kind = GadgetKind::Chain(n);
        sets.push((format!("Chain({n})"), gadget::<B>(kind, &default_attach(kind)).unwrap().points));
    }
    sets.push(("lattice_ball(1)".into(), ball1()));
    let rows: Vec<Value> = sets
        .par_iter()
        .map(|(name, t)| {
            let pts: Vec<P> = t.iter().map(|p| p.to_f64()).collect();
            let naive = naive_unit_maps(&pts).expect("start edge and connected");
            let ours = placement_order(t, &t[0], &t[1]).and_then(|o| enumerate_unit_maps(t, &o, None));
            let (verdict, ours_desc, naive_desc) = match (&ours, &naive) {
                (Ok(u), NaiveOutcome::Maps(n)) => (same_classes(&floats(&u.maps), n), json!(u.maps.len()), json!(n.len())),
                (Err(BqError::NotAnchored { .. }), NaiveOutcome::Flexible) => (true, json!("flexible"), json!("flexible")),
                (o, n) => (
                    false,
                    json!(o.as_ref().map(|u| u.maps.len().to_string()).unwrap_or_else(|e| e.to_string())),
                    json!(format!("{n:?}").chars().take(40).collect::<String>()),
                ),
            };
            json!({ "set": name, "points": t.len(), "enumerated": ours_desc, "oracle": naive_desc, "match": verdict })
        })
        .collect();
    let bad = rows.iter().filter(|r| r["match"] != json!(true)).count();
    let summary = rows.iter().map(|r| format!("{}={}", r["set"].as_str().unwrap(), r["enumerated"])).collect::<Vec<_>>().join(", ");
    criterion(4, bad == 0, format!("{summary}; {bad} mismatches"), json!({ "sets": rows }))
}

fn lattice_point(a: i64, b: i64) -> Point<B> {
    let e1 = Point::new(<B as Coord>::one(), <B as Coord>::zero());
    let e2 = e1.rot60();
    e1.scale(&B::from_int(a)).add(&e2.scale(&B::from_int(b)))
}

fn random_lattice_point(r: &mut impl Rng, radius: i64) -> Point<B> {
    loop {
        let (a, b) = (r.gen_range(-radius..=radius), r.gen_range(-radius..=radius));
        if rigidlab::plane::hex_distance(a, b) <= radius {
            return lattice_point(a, b);
        }
    }
}

fn random_q3_point(r: &mut impl Rng) -> Point<B> {
    let (a, c) = (r.gen_range(-8i64..=8), r.gen_range(-8i64..=8));
    let (b, d) = (r.gen_range(1i64..=4), r.gen_range(1i64..=4));
    Point::new(B::from_ratio(a, b), B::from_ratio(c, d) * B::sqrt3())
}

fn outcome_name(r: &Result<rigidlab::product::CheckedWitness<B>, ProductError>) -> (bool, Value) {
    match r {
        Ok(c) => (
            c.outcome.is_valid(),
            json!({
                "outcome": if c.outcome.is_valid() { "valid" } else { "counterexample" },
                "witness_elements": c.witness.elements.len(),
                "product_elements": c.product.structure().n(),
            }),
        ),
        Err(e) => (false, json!({ "outcome": "error", "error": e.to_string() })),
    }
}

pub fn case1(seed: u64) -> Criterion {
    let mut r = rng(seed, 5);
    let b = ball1();
    let s = members(&b, seed, 1);
    let mut pairs = Vec::new();
    while pairs.len() < 10 {
        let x = random_lattice_point(&mut r, 3);
        let y = if pairs.len() % 2 == 0 { random_lattice_point(&mut r, 3) } else { random_q3_point(&mut r) };
        if x != y {
            pairs.push((x, y));
        }
    }
    let rows: Vec<(bool, Value)> = pairs
        .par_iter()
        .map(|(x, y)| {
            let (ok, mut v) = outcome_name(&run_case1(&b, &s, x, y, 0, GrowBudget::default()));
            v["x"] = json!(x.to_string());
            v["y"] = json!(y.to_string());
            (ok, v)
        })
        .collect();
    let valid = rows.iter().filter(|r| r.0).count();
    criterion(
        5,
        valid == rows.len(),
        format!("{valid}/{} pairs valid", rows.len()),
        json!({ "pairs": rows.into_iter().map(|r| r.1).collect::<Vec<_>>() }),
    )
}

pub fn case2(seed: u64) -> Criterion {
    let mut r = rng(seed, 6);
    let b = ball1();
    let s = members(&b, seed, 1).remove(0);
    let free = free_edges(&b).unwrap();
    let edge = r.gen_range(0..free.len());
    let flipped: BTreeSet<(usize, usize)> = free.iter().enumerate().filter(|&(k, _)| k == edge).map(|(_, &e)| e).collect();
    let bits: Vec<bool> = free.iter().map(|&(i, j)| s.pairs().contains(&(j, i))).collect();
    let z = orientation_from_bits(&b, |k| bits[k] != (k == edge)).unwrap();
    let fam = vec![s, z];
    let ring = (0..b.len()).find(|&i| !base_triangle::<B>().contains(&b[i])).expect("ring vertex");
    let schedule = [Scalar::zero_exact()];
    let xs = [0, ring];
    let rows: Vec<(bool, Value)> = xs
        .par_iter()
        .map(|&xi| {
            let (ok, mut v) = outcome_name(&run_case2(&b, &fam, &b[xi], 0, 1, &schedule, GrowBudget::default()));
            v["x"] = json!(b[xi].to_string());
            (ok, v)
        })
        .collect();
    let valid = rows.iter().filter(|r| r.0).count();
    criterion(
        6,
        valid == rows.len(),
        format!("flipped edge {:?}; {valid}/{} points valid", flipped.iter().next().unwrap(), rows.len()),
        json!({ "flipped": flipped, "points": rows.into_iter().map(|r| r.1).collect::<Vec<_>>() }),
    )
}

pub fn witnessed_implies_rigid(seed: u64) -> Criterion {
    let mut r = rng(seed, 7);
    let cases: Vec<RelStruct> = (0..100).map(|_| random_structure(&mut r, 5)).collect();
    let reports: Vec<(bool, bool)> = cases
        .par_iter()
        .map(|s| {
            let rep = witness_rigidity_check(s, 1 << s.n());
            (rep.all_pairs_witnessed, rep.rigid)
        })
        .collect();
    let violations: Vec<usize> = reports.iter().enumerate().filter(|(_, &(w, rigid))| w && !rigid).map(|(k, _)| k).collect();
    let witnessed = reports.iter().filter(|r| r.0).count();
    let rigid = reports.iter().filter(|r| r.1).count();
    criterion(
        7,
        violations.is_empty(),
        format!("{} structures, {witnessed} fully witnessed, {rigid} rigid, {} violations", cases.len(), violations.len()),
        json!({ "structures": cases.len(), "fully_witnessed": witnessed, "rigid": rigid, "violations": violations }),
    )
}

pub fn trilateration(seed: u64) -> Criterion {
    let mut r = rng(seed, 8);
    let points: Vec<Point<B>> = (0..200).map(|_| random_q3_point(&mut r)).collect();
    let recovered = points
        .iter()
        .filter(|p| {
            let [d0, d1, d2] = triangle_distances(*p);
            trilaterate(&d0, &d1, &d2).as_ref() == Ok(*p)
        })
        .count();
    let mut rejected = 0;
    for p in points.iter().take(20) {
        let [d0, d1, d2] = triangle_distances(p);
        let k = r.gen_range(0..3);
        let bump = B::from_ratio(r.gen_range(1..=9), r.gen_range(2..=7));
        let mut d = [d0, d1, d2];
        d[k] = d[k].clone() + bump;
        if trilaterate(&d[0], &d[1], &d[2]) == Err(ProductError::Inconsistent) {
            rejected += 1;
        }
    }
    criterion(
        8,
        recovered == 200 && rejected == 20,
        format!("{recovered}/200 recovered, {rejected}/20 perturbed triples rejected"),
        json!({ "recovered": recovered, "rejected": rejected }),
    )
}
