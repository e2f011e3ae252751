//! The product relation on `X × J` (pairs only inside a fiber, copied from
//! that fiber's orientation) and the witness sets that make it locally rigid.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bq::{deviation, grow_witness, BqError, CertReport, GrowBudget, Grown};
use crate::numeric::{dist2, Backend, Coord, FloatScalar, NumericError, Point, Scalar};
use crate::phi::{FamilyError, Orientation, OrientationFamily, PhiError};
use crate::plane::{augment_tilde, base_triangle, triangle_set, unit_path, PointSet, UnitPath};
use crate::relations::{check_witness, enumerate_homs, Label, RelError, RelStruct, WitnessOutcome, WitnessSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProductError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error("family base differs from X")]
    BaseMismatch,
    #[error("squared distances name no plane point")]
    Inconsistent,
    #[error("x and y are equidistant from all of p₀, p₁, p₂")]
    NoSeparatingAnchor,
    #[error("the orientations agree on every singly-oriented edge")]
    NoConflict,
    #[error("witness point {0} is not in the product base")]
    OutsideBase(String),
    #[error("certificates leave {0} candidate images for a pinned point")]
    NotStrict(usize),
    #[error("member index {0} is outside the family")]
    NoSuchMember(usize),
    #[error(transparent)]
    Bq(#[from] BqError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Rel(#[from] RelError),
}

/// `X × J` with `((x, S), (y, Z))` related iff `S = Z` and `(x, y) ∈ S`.
/// Element `(point, member)` has id `member·|X| + point`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductStruct<C> {
    family: OrientationFamily<C>,
    structure: RelStruct,
}

impl<C: Coord> ProductStruct<C> {
    pub fn base(&self) -> &PointSet<C> {
        self.family.base()
    }

    pub fn family(&self) -> &OrientationFamily<C> {
        &self.family
    }

    pub fn structure(&self) -> &RelStruct {
        &self.structure
    }

    pub fn element(&self, point: usize, member: usize) -> usize {
        member * self.base().len() + point
    }

    pub fn decode(&self, e: usize) -> (usize, usize) {
        (e % self.base().len(), e / self.base().len())
    }

    /// Element ids of `points` in fiber `member`.
    pub fn fiber_elements(&self, points: &PointSet<C>, member: usize) -> Result<BTreeSet<usize>, ProductError> {
        points
            .iter()
            .map(|p| self.base().index_of(p).map(|i| self.element(i, member)).ok_or_else(|| ProductError::OutsideBase(p.to_string())))
            .collect()
    }
}

/// Builds the product over `x` for a nonempty list of distinct members.
pub fn build_product<C: Coord>(x: &PointSet<C>, members: Vec<Orientation<C>>) -> Result<ProductStruct<C>, ProductError> {
    let family = OrientationFamily::new("J", members)?;
    if !family.base().same_as(x) {
        return Err(ProductError::BaseMismatch);
    }
    let n = x.len();
    let mut pairs = Vec::new();
    let mut labels = Vec::new();
    for (k, m) in family.members().iter().enumerate() {
        pairs.extend(m.pairs().iter().map(|&(i, j)| (k * n + i, k * n + j)));
        labels.extend((0..n).map(|point| Label::Product { point, member: k }));
    }
    let structure = RelStruct::new(n * family.len(), pairs)?.with_labels(labels);
    Ok(ProductStruct { family, structure })
}

/// Re-expresses every member on `ambient ⊇ X`, orienting new unit edges
/// the same way in all of them.
pub fn extend_members<C: Coord>(members: &[Orientation<C>], ambient: &PointSet<C>) -> Result<Vec<Orientation<C>>, ProductError> {
    Ok(members.iter().map(|m| m.extend(ambient)).collect::<Result<_, _>>()?)
}

/// A unit edge with `(u, v) ∈ S \ Z` and `(v, u) ∈ Z \ S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct ConflictEdge<C> {
    pub u: usize,
    pub v: usize,
    pub u_point: Point<C>,
    pub v_point: Point<C>,
}

/// The conflict edge with the least `(u, v)` in index order.
pub fn find_conflict_edge<C: Coord>(s: &Orientation<C>, z: &Orientation<C>) -> Result<Option<ConflictEdge<C>>, ProductError> {
    if !s.base().same_as(z.base()) {
        return Err(ProductError::BaseMismatch);
    }
    Ok(s.disagreements(z).first().map(|&(u, v)| ConflictEdge { u, v, u_point: s.base()[u].clone(), v_point: s.base()[v].clone() }))
}

/// The point at squared distances `d0`, `d1`, `d2` from p₀, p₁, p₂.
///
/// Differences of the three circle equations are linear and give the
/// point; the first equation then decides consistency.
pub fn trilaterate<C: Coord>(d0: &C, d1: &C, d2: &C) -> Result<Point<C>, ProductError> {
    let one = C::one();
    let x = (d0.clone() - d1.clone() + one.clone()).checked_div(&C::from_int(2))?;
    let y = (d0.clone() - d2.clone() + one - x.clone()).checked_div(&C::sqrt3())?;
    let p = Point::new(x, y);
    if p.norm2().approx_eq(d0) {
        Ok(p)
    } else {
        Err(ProductError::Inconsistent)
    }
}

/// Squared distances of `p` to p₀, p₁, p₂.
pub fn triangle_distances<C: Coord>(p: &Point<C>) -> [C; 3] {
    base_triangle::<C>().map(|t| dist2(&t, p))
}

/// A point set that pins `|f(pᵢ) − f(target)|` for every unit-preserving
/// map `f` of it fixing pᵢ, within `epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct PinCertificate<C> {
    pub anchor: usize,
    pub target: Point<C>,
    pub epsilon: Scalar,
    /// The certified set grown between pᵢ and the target, augmented by unit
    /// paths so its unit graph is connected.
    pub points: PointSet<C>,
    /// Absent when the target is pᵢ itself.
    pub report: Option<CertReport<C>>,
}

fn pin<C: Coord>(anchor: usize, target: &Point<C>, epsilon: &Scalar, budget: GrowBudget) -> Result<PinCertificate<C>, ProductError> {
    let p = base_triangle::<C>()[anchor].clone();
    if p.approx_eq(target) {
        return Ok(PinCertificate {
            anchor,
            target: target.clone(),
            epsilon: epsilon.clone(),
            points: PointSet::from_points([p]),
            report: None,
        });
    }
    let Grown { points, report, .. } = grow_witness(&p, target, epsilon, budget)?;
    Ok(PinCertificate {
        anchor,
        target: target.clone(),
        epsilon: epsilon.clone(),
        points: augment_tilde(&points, target)?,
        report: Some(report),
    })
}

fn half(s: Scalar) -> Scalar {
    match s {
        Scalar::Exact(v) => Scalar::Exact(v * <crate::numeric::Biquad as Coord>::from_ratio(1, 2)),
        Scalar::Float(v) => Scalar::Float(FloatScalar::new(v.value / 2.0, v.tol)),
    }
}

/// The smallest `i` with `|pᵢ − x| ≠ |pᵢ − y|`, and half the gap. On the
/// float backend the gap must exceed 4τ.
pub fn separating_anchor<C: Coord>(x: &Point<C>, y: &Point<C>) -> Result<(usize, Scalar), ProductError> {
    for (i, p) in base_triangle::<C>().iter().enumerate() {
        let (dx, dy) = (dist2(p, x), dist2(p, y));
        if dx.approx_eq(&dy) {
            continue;
        }
        let (gap, _) = deviation(&dx, &dy);
        if C::BACKEND == Backend::Float {
            let tau = dx.tolerance().max(dy.tolerance());
            if gap.to_f64() <= 4.0 * tau {
                continue;
            }
        }
        return Ok((i, half(gap)));
    }
    Err(ProductError::NoSeparatingAnchor)
}

/// Plane part of the first-case witness: the triangle together with a
/// certified set from the separating anchor to `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct Case1Plan<C> {
    pub x: Point<C>,
    pub y: Point<C>,
    pub certificate: PinCertificate<C>,
    pub points: PointSet<C>,
}

pub fn plan_case1<C: Coord>(x: &Point<C>, y: &Point<C>, budget: GrowBudget) -> Result<Case1Plan<C>, ProductError> {
    let (i, eps) = separating_anchor(x, y)?;
    let certificate = pin(i, x, &eps, budget)?;
    let points = triangle_set::<C>().union(&certificate.points);
    Ok(Case1Plan { x: x.clone(), y: y.clone(), certificate, points })
}

/// Plane part of the second-case witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct Case2Plan<C> {
    pub x: Point<C>,
    pub conflict: ConflictEdge<C>,
    pub path: UnitPath<C>,
    /// Three anchors for `u`, then three for `v`.
    pub certificates: Vec<PinCertificate<C>>,
    pub points: PointSet<C>,
}

/// Pins both ends of the first conflict edge against all three anchors,
/// trying the tolerances of `schedule` in order for each pin, and joins
/// `x` to p₀ by a unit path.
pub fn plan_case2<C: Coord>(
    s: &Orientation<C>,
    z: &Orientation<C>,
    x: &Point<C>,
    schedule: &[Scalar],
    budget: GrowBudget,
) -> Result<Case2Plan<C>, ProductError> {
    let conflict = find_conflict_edge(s, z)?.ok_or(ProductError::NoConflict)?;
    let path = unit_path(x, &Point::origin())?;
    let mut certificates = Vec::new();
    for target in [&conflict.u_point, &conflict.v_point] {
        for i in 0..3 {
            let mut last = None;
            for eps in schedule {
                match pin(i, target, eps, budget) {
                    Ok(c) => {
                        last = Some(Ok(c));
                        break;
                    }
                    Err(e) => last = Some(Err(e)),
                }
            }
            certificates.push(last.unwrap_or(Err(ProductError::Bq(BqError::BudgetExhausted { best_deviation: None })))?);
        }
    }
    let mut points = triangle_set::<C>();
    for p in &path.vertices {
        points.insert(p.clone());
    }
    for c in &certificates {
        points = points.union(&c.points);
    }
    Ok(Case2Plan { x: x.clone(), conflict, path, certificates, points })
}

/// Checks the pins identify their target inside `codomain`: every other
/// point misses some pinned distance by more than that pin's deviation.
pub fn strictness<C: Coord>(certs: &[PinCertificate<C>], codomain: &PointSet<C>) -> usize {
    let mut by_target: BTreeMap<String, Vec<&PinCertificate<C>>> = BTreeMap::new();
    for c in certs {
        by_target.entry(c.target.to_string()).or_default().push(c);
    }
    let tri = base_triangle::<C>();
    let mut ambiguous = 0;
    for group in by_target.values() {
        let target = &group[0].target;
        for cand in codomain.iter().filter(|c| !c.approx_eq(target)) {
            let excluded = group.iter().any(|cert| {
                let p = &tri[cert.anchor];
                let slack = cert.report.as_ref().map_or_else(Scalar::zero_exact, |r| r.max_deviation.clone());
                let (miss, _) = deviation(&dist2(p, target), &dist2(p, cand));
                miss.cmp_lenient(&slack).is_gt()
            });
            if !excluded {
                ambiguous += 1;
            }
        }
    }
    ambiguous
}

/// Witness elements in one fiber, with the plane reasoning behind them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct ProductWitness<C> {
    pub src: usize,
    pub tgt: usize,
    pub elements: BTreeSet<usize>,
    pub points: PointSet<C>,
    pub certificates: Vec<PinCertificate<C>>,
    pub conflict: Option<ConflictEdge<C>>,
}

fn point_index<C: Coord>(p: &ProductStruct<C>, q: &Point<C>) -> Result<usize, ProductError> {
    p.base().index_of(q).ok_or_else(|| ProductError::OutsideBase(q.to_string()))
}

/// First-case witness for `(x, S) ↦ (y, S)` with `x ≠ y`, all in fiber `s`.
pub fn witness_case1<C: Coord>(
    p: &ProductStruct<C>,
    x: &Point<C>,
    y: &Point<C>,
    s: usize,
    budget: GrowBudget,
) -> Result<ProductWitness<C>, ProductError> {
    let plan = plan_case1(x, y, budget)?;
    Ok(ProductWitness {
        src: p.element(point_index(p, x)?, s),
        tgt: p.element(point_index(p, y)?, s),
        elements: p.fiber_elements(&plan.points, s)?,
        points: plan.points,
        certificates: vec![plan.certificate],
        conflict: None,
    })
}

/// Second-case witness for `(x, S) ↦ (x, Z)` with `S ≠ Z`, in fiber `s`.
pub fn witness_case2<C: Coord>(
    p: &ProductStruct<C>,
    x: &Point<C>,
    s: usize,
    z: usize,
    schedule: &[Scalar],
    budget: GrowBudget,
) -> Result<ProductWitness<C>, ProductError> {
    let members = p.family().members();
    let plan = plan_case2(&members[s], &members[z], x, schedule, budget)?;
    let ambiguous = strictness(&plan.certificates, p.base());
    if ambiguous > 0 {
        return Err(ProductError::NotStrict(ambiguous));
    }
    let xi = point_index(p, x)?;
    Ok(ProductWitness {
        src: p.element(xi, s),
        tgt: p.element(xi, z),
        elements: p.fiber_elements(&plan.points, s)?,
        points: plan.points,
        certificates: plan.certificates,
        conflict: Some(plan.conflict),
    })
}

/// Whether any map of `w` into the product sending `src ↦ tgt` keeps the
/// relation.
pub fn verify_product_witness<C: Coord>(
    p: &ProductStruct<C>,
    w: &BTreeSet<usize>,
    src: usize,
    tgt: usize,
) -> Result<WitnessOutcome, ProductError> {
    Ok(check_witness(p.structure(), &WitnessSet { subset: w.clone(), x: src, y: tgt })?)
}

/// A product map restricted to one source fiber, split into its plane part
/// and its member part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberMap {
    pub point_map: BTreeMap<usize, usize>,
    pub member_map: (usize, usize),
}

/// Splits `mapping` (over the sorted elements of `w`) when `w` lies in one
/// fiber and its image in one fiber.
pub fn fiber_map<C: Coord>(p: &ProductStruct<C>, w: &BTreeSet<usize>, mapping: &[usize]) -> Option<FiberMap> {
    let src: BTreeSet<usize> = w.iter().map(|&e| p.decode(e).1).collect();
    let dst: BTreeSet<usize> = mapping.iter().map(|&e| p.decode(e).1).collect();
    if src.len() != 1 || dst.len() != 1 {
        return None;
    }
    let point_map = w.iter().zip(mapping).map(|(&e, &f)| (p.decode(e).0, p.decode(f).0)).collect();
    Some(FiberMap { point_map, member_map: (*src.first()?, *dst.first()?) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub homs: usize,
    pub truncated: bool,
    /// Homomorphisms whose image met more than one fiber.
    pub split: usize,
}

/// Enumerates up to `limit` maps of `w` into the product and counts those
/// that do not land in a single fiber.
pub fn fiber_check<C: Coord>(p: &ProductStruct<C>, w: &BTreeSet<usize>, limit: usize) -> FiberReport {
    let sub = p.structure().induced(w);
    let found = enumerate_homs(&sub, p.structure(), &[], Some(limit)).expect("no pins");
    let split = found.homs.iter().filter(|h| fiber_map(p, w, &h.mapping).is_none()).count();
    FiberReport { homs: found.homs.len(), truncated: found.truncated, split }
}

/// A witness together with the product it was checked in and the verdict.
#[derive(Clone, Debug)]
pub struct CheckedWitness<C> {
    pub product: ProductStruct<C>,
    pub witness: ProductWitness<C>,
    pub outcome: WitnessOutcome,
}

fn ambient_product<C: Coord>(
    base: &PointSet<C>,
    members: &[Orientation<C>],
    extra: &PointSet<C>,
) -> Result<ProductStruct<C>, ProductError> {
    let ambient = base.union(extra);
    build_product(&ambient, extend_members(members, &ambient)?)
}

/// Plans the first-case witness for `(x, S) ↦ (y, S)`, builds the product of
/// `members` over `base` enlarged by the plan's points and `y`, and checks it.
pub fn run_case1<C: Coord>(
    base: &PointSet<C>,
    members: &[Orientation<C>],
    x: &Point<C>,
    y: &Point<C>,
    s: usize,
    budget: GrowBudget,
) -> Result<CheckedWitness<C>, ProductError> {
    if s >= members.len() {
        return Err(ProductError::NoSuchMember(s));
    }
    let mut extra = plan_case1(x, y, budget)?.points;
    extra.insert(y.clone());
    let product = ambient_product(base, members, &extra)?;
    let witness = witness_case1(&product, x, y, s, budget)?;
    let outcome = verify_product_witness(&product, &witness.elements, witness.src, witness.tgt)?;
    Ok(CheckedWitness { product, witness, outcome })
}

/// Second-case counterpart of [`run_case1`] for `(x, S) ↦ (x, Z)`.
pub fn run_case2<C: Coord>(
    base: &PointSet<C>,
    members: &[Orientation<C>],
    x: &Point<C>,
    s: usize,
    z: usize,
    schedule: &[Scalar],
    budget: GrowBudget,
) -> Result<CheckedWitness<C>, ProductError> {
    if let Some(&k) = [s, z].iter().find(|&&k| k >= members.len()) {
        return Err(ProductError::NoSuchMember(k));
    }
    let plan = plan_case2(&members[s], &members[z], x, schedule, budget)?;
    let product = ambient_product(base, members, &plan.points)?;
    let witness = witness_case2(&product, x, s, z, schedule, budget)?;
    let outcome = verify_product_witness(&product, &witness.elements, witness.src, witness.tgt)?;
    Ok(CheckedWitness { product, witness, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{Biquad, QScalar};
    use crate::phi::orientation_from_bits;
    use crate::plane::{lattice_ball, unit_graph};
    use proptest::prelude::*;

    type B = Biquad;

    fn q(n: i64, d: i64, m: i64, e: i64) -> B {
        QScalar::from_ratios(n, d, m, e).lift()
    }

    fn ip(a: i64, b: i64) -> Point<B> {
        let e1 = Point::new(<B as Coord>::one(), <B as Coord>::zero());
        e1.scale(&<B as Coord>::from_int(a)).add(&e1.rot60().scale(&<B as Coord>::from_int(b)))
    }

    fn tri_orientation() -> Orientation<B> {
        orientation_from_bits(&triangle_set(), |_| false).unwrap()
    }

    #[test]
    fn product_shapes() {
        let t = triangle_set::<B>();
        let p = build_product(&t, vec![tri_orientation()]).unwrap();
        assert_eq!(p.structure().n(), 3);
        assert_eq!(p.structure().pairs().len(), 5);
        assert!(matches!(
            build_product(&t, vec![tri_orientation(), tri_orientation()]),
            Err(ProductError::Family(FamilyError::Duplicate(0, 1)))
        ));
        assert!(matches!(build_product::<B>(&t, vec![]), Err(ProductError::Family(FamilyError::EmptyFamily))));
        let b = lattice_ball::<B>(1, true);
        let s = orientation_from_bits(&b, |k| k % 2 == 0).unwrap();
        let z = orientation_from_bits(&b, |k| k % 3 == 0).unwrap();
        let p = build_product(&b, vec![s.clone(), z.clone()]).unwrap();
        assert_eq!(p.structure().n(), 14);
        assert_eq!(p.structure().pairs().len(), s.pairs().len() + z.pairs().len());
        assert_eq!(p.decode(p.element(5, 1)), (5, 1));
        for &(a, c) in p.structure().pairs() {
            let ((i, k), (j, l)) = (p.decode(a), p.decode(c));
            assert_eq!(k, l);
            assert!(p.family().members()[k].pairs().contains(&(i, j)));
        }
    }

    #[test]
    fn conflict_edges() {
        let b = lattice_ball::<B>(1, true);
        let s = orientation_from_bits(&b, |_| false).unwrap();
        assert_eq!(find_conflict_edge(&s, &s).unwrap(), None);
        let one = orientation_from_bits(&b, |k| k == 5).unwrap();
        let free = crate::phi::free_edges(&b).unwrap();
        let c = find_conflict_edge(&s, &one).unwrap().unwrap();
        assert_eq!((c.u, c.v), free[5]);
        let three = orientation_from_bits(&b, |k| k == 2 || k == 6 || k == 8).unwrap();
        let c = find_conflict_edge(&s, &three).unwrap().unwrap();
        assert_eq!((c.u, c.v), free[2]);
        assert!(s.pairs().contains(&(c.u, c.v)) && three.pairs().contains(&(c.v, c.u)));
    }

    #[test]
    fn trilateration_examples() {
        let [z, o] = [<B as Coord>::zero(), <B as Coord>::one()];
        assert_eq!(trilaterate(&z, &o, &o).unwrap(), Point::origin());
        let three = <B as Coord>::from_int(3);
        assert_eq!(trilaterate(&o, &o, &three).unwrap(), Point::new(q(1, 2, 0, 1), q(0, 1, -1, 2)));
        let nine = <B as Coord>::from_int(9);
        assert_eq!(trilaterate(&o, &nine, &nine), Err(ProductError::Inconsistent));
    }

    #[test]
    fn anchor_selection() {
        let t = base_triangle::<B>();
        let (i, eps) = separating_anchor(&t[1], &t[2]).unwrap();
        assert_eq!((i, eps), (1, Scalar::Exact(q(1, 2, 0, 1))));
        let (i, eps) = separating_anchor(&ip(2, 0), &ip(3, 0)).unwrap();
        assert_eq!((i, eps), (0, Scalar::Exact(q(1, 2, 0, 1))));
        let below = Point::new(q(1, 2, 0, 1), q(0, 1, -1, 2));
        // Equidistant from p₀ and p₁; |p₂ − below| = √3.
        assert_eq!(separating_anchor(&t[2], &below).unwrap(), (2, Scalar::Exact(q(0, 1, 1, 2))));
        assert_eq!(separating_anchor(&t[0], &t[0]), Err(ProductError::NoSeparatingAnchor));
        // Root of a non-square: the gap falls back to floating point.
        let (_, eps) = separating_anchor(&ip(0, 0), &ip(2, 1)).unwrap();
        assert!(!eps.is_exact() && (eps.to_f64() - 7f64.sqrt() / 2.0).abs() < 1e-12);
    }

    fn product_for(points: &PointSet<B>, members: &[Orientation<B>]) -> ProductStruct<B> {
        let ambient = lattice_ball::<B>(1, true).union(points);
        build_product(&ambient, extend_members(members, &ambient).unwrap()).unwrap()
    }

    #[test]
    fn case1_triangle_swap() {
        let t = triangle_set::<B>();
        let p = build_product(&t, vec![tri_orientation()]).unwrap();
        let w = witness_case1(&p, &t[1], &t[2], 0, GrowBudget::default()).unwrap();
        assert_eq!(w.elements, BTreeSet::from([0, 1, 2]));
        assert_eq!(verify_product_witness(&p, &w.elements, w.src, w.tgt).unwrap(), WitnessOutcome::Valid);
    }

    #[test]
    fn case1_lattice_pairs() {
        let b = lattice_ball::<B>(1, true);
        let s = orientation_from_bits(&b, |k| k % 2 == 1).unwrap();
        for (x, y) in [(ip(2, 0), ip(3, 0)), (ip(-1, 0), ip(0, -1)), (ip(1, 1), ip(-1, 1))] {
            let plan = plan_case1(&x, &y, GrowBudget::default()).unwrap();
            let mut pts = plan.points.clone();
            pts.insert(y.clone());
            let p = product_for(&pts, std::slice::from_ref(&s));
            let w = witness_case1(&p, &x, &y, 0, GrowBudget::default()).unwrap();
            assert!(w.points.contains(&x));
            assert!(triangle_set::<B>().is_subset_of(&w.points));
            assert_eq!(verify_product_witness(&p, &w.elements, w.src, w.tgt).unwrap(), WitnessOutcome::Valid);
        }
    }

    #[test]
    fn missing_triangle_is_refuted() {
        // A single edge away from the conflict: its copy in the other fiber
        // is an image.
        let b = lattice_ball::<B>(1, true);
        let s = orientation_from_bits(&b, |_| false).unwrap();
        let z = orientation_from_bits(&b, |k| k == 0).unwrap();
        let p = build_product(&b, vec![s, z]).unwrap();
        let w: BTreeSet<usize> = [3, 4].into_iter().map(|i| p.element(i, 0)).collect();
        let out = verify_product_witness(&p, &w, p.element(3, 0), p.element(3, 1)).unwrap();
        assert!(matches!(out, WitnessOutcome::Counterexample { .. }));
    }

    #[test]
    fn case2_on_ball() {
        let b = lattice_ball::<B>(1, true);
        let free = crate::phi::free_edges(&b).unwrap();
        let spoke = free.iter().position(|&(i, j)| i == 0 || j == 0).unwrap();
        let s = orientation_from_bits(&b, |_| false).unwrap();
        let z = orientation_from_bits(&b, |k| k == spoke).unwrap();
        let schedule = [Scalar::zero_exact()];
        let plan = plan_case2(&s, &z, &b[0], &schedule, GrowBudget::default()).unwrap();
        assert_eq!(plan.path.vertices.len(), 1);
        assert!(plan.certificates.iter().all(|c| c.report.as_ref().is_none_or(|r| r.max_deviation == Scalar::zero_exact())));
        let p = product_for(&plan.points, &[s, z]);
        let w = witness_case2(&p, &b[0], 0, 1, &schedule, GrowBudget::default()).unwrap();
        let c = w.conflict.as_ref().unwrap();
        assert!(w.points.contains(&c.u_point) && w.points.contains(&c.v_point));
        assert!(unit_graph(&w.points).is_connected());
        assert_eq!(verify_product_witness(&p, &w.elements, w.src, w.tgt).unwrap(), WitnessOutcome::Valid);
        let f = fiber_check(&p, &w.elements, 8);
        assert!(f.homs >= 1 && f.split == 0);
    }

    fn small_q() -> impl Strategy<Value = B> {
        (-12i64..=12, 1i64..=6, -12i64..=12, 1i64..=6).prop_map(|(a, b, c, d)| q(a, b, c, d))
    }

    proptest! {
        #[test]
        fn trilaterate_recovers(x in small_q(), y in small_q()) {
            let p = Point::new(x, y);
            let [d0, d1, d2] = triangle_distances(&p);
            prop_assert_eq!(trilaterate(&d0, &d1, &d2).unwrap(), p);
        }

        #[test]
        fn case1_contains_triangle(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2, d in -2i64..=2) {
            prop_assume!((a, b) != (c, d));
            let plan = plan_case1(&ip(a, b), &ip(c, d), GrowBudget::default()).unwrap();
            prop_assert!(plan.points.contains(&ip(a, b)));
            prop_assert!(triangle_set::<B>().is_subset_of(&plan.points));
        }
    }
}
