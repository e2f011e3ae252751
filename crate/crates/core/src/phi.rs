//! Orientations of the unit-distance graph of a finite point set that keep
//! the base triangle's doubled pairs, and the homomorphism harness that
//! checks the triangle is fixed.

use std::collections::BTreeSet;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{is_unit, Coord};
use crate::plane::{triangle_indices, unit_graph, PointSet};
use crate::relations::{enumerate_homs, Hom, RelStruct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhiError {
    #[error("point set does not contain the base triangle")]
    MissingTriangle,
    #[error("orientation violates {0}")]
    Invalid(PhiViolation),
    #[error("pair ({0}, {1}) is out of range")]
    PairOutOfRange(usize, usize),
    #[error("{0} orientations is too many to list")]
    TooMany(u128),
    #[error("orientations are over different base sets")]
    BaseMismatch,
    #[error("point set is not contained in the base")]
    NotSubset,
}

/// The first clause an orientation breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum PhiViolation {
    /// A listed pair is not a unit edge.
    NotUnit { i: usize, j: usize },
    /// A unit edge appears in neither direction.
    Uncovered { i: usize, j: usize },
    /// A pair is doubled but is not one of the four allowed.
    ExtraDoubled { i: usize, j: usize },
    /// One of the four required doubled pairs is single.
    MissingDoubled { i: usize, j: usize },
    /// `(p₁, p₂)` is absent.
    TriangleDirection,
}

impl std::fmt::Display for PhiViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhiViolation::NotUnit { i, j } => write!(f, "R ∪ R⁻¹ = U: ({i}, {j}) is not a unit pair"),
            PhiViolation::Uncovered { i, j } => write!(f, "R ∪ R⁻¹ = U: edge {{{i}, {j}}} is unoriented"),
            PhiViolation::ExtraDoubled { i, j } => write!(f, "R ∩ R⁻¹: ({i}, {j}) is doubled"),
            PhiViolation::MissingDoubled { i, j } => write!(f, "R ∩ R⁻¹: ({i}, {j}) must be doubled"),
            PhiViolation::TriangleDirection => write!(f, "(p₁, p₂) ∈ R"),
        }
    }
}

fn required_doubled([p0, p1, p2]: [usize; 3]) -> [(usize, usize); 4] {
    [(p0, p1), (p1, p0), (p0, p2), (p2, p0)]
}

/// Checks the three defining clauses in order and names the first failure.
pub fn check_phi<C: Coord>(base: &PointSet<C>, pairs: &BTreeSet<(usize, usize)>) -> Result<Option<PhiViolation>, PhiError> {
    let tri = triangle_indices(base).ok_or(PhiError::MissingTriangle)?;
    let n = base.len();
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= n || j >= n) {
        return Err(PhiError::PairOutOfRange(i, j));
    }
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| !is_unit(&base[i], &base[j])) {
        return Ok(Some(PhiViolation::NotUnit { i, j }));
    }
    let g = unit_graph(base);
    if let Some(&(i, j)) = g.edges().iter().find(|&&(i, j)| !pairs.contains(&(i, j)) && !pairs.contains(&(j, i))) {
        return Ok(Some(PhiViolation::Uncovered { i, j }));
    }
    let doubled = required_doubled(tri);
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| pairs.contains(&(j, i)) && !doubled.contains(&(i, j))) {
        return Ok(Some(PhiViolation::ExtraDoubled { i, j }));
    }
    if let Some(&(i, j)) = doubled.iter().find(|&&(i, j)| !pairs.contains(&(i, j))) {
        return Ok(Some(PhiViolation::MissingDoubled { i, j }));
    }
    if !pairs.contains(&(tri[1], tri[2])) {
        return Ok(Some(PhiViolation::TriangleDirection));
    }
    Ok(None)
}

/// A member of Φ restricted to a finite base containing the triangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct Orientation<C> {
    base: PointSet<C>,
    pairs: BTreeSet<(usize, usize)>,
}

impl<C: Coord> Orientation<C> {
    pub fn new(base: PointSet<C>, pairs: BTreeSet<(usize, usize)>) -> Result<Self, PhiError> {
        match check_phi(&base, &pairs)? {
            None => Ok(Orientation { base, pairs }),
            Some(v) => Err(PhiError::Invalid(v)),
        }
    }

    pub fn base(&self) -> &PointSet<C> {
        &self.base
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn triangle(&self) -> [usize; 3] {
        triangle_indices(&self.base).expect("validated on construction")
    }

    pub fn relation(&self) -> RelStruct {
        RelStruct::new(self.base.len(), self.pairs.iter().copied()).expect("pairs in range")
    }

    /// The relation restricted to `sub ⊆ base`, indexed by position in `sub`.
    pub fn restrict(&self, sub: &PointSet<C>) -> Result<RelStruct, PhiError> {
        let idx = sub.indices_in(&self.base).ok_or(PhiError::NotSubset)?;
        let pairs =
            (0..idx.len()).flat_map(|a| (0..idx.len()).map(move |b| (a, b))).filter(|&(a, b)| self.pairs.contains(&(idx[a], idx[b])));
        Ok(RelStruct::new(idx.len(), pairs).expect("in range"))
    }

    /// Re-expresses the orientation on `ambient ⊇ base`. Unit edges of
    /// `ambient` not already oriented go from lower to higher ambient index,
    /// so two orientations extended to the same ambient agree on them.
    pub fn extend(&self, ambient: &PointSet<C>) -> Result<Orientation<C>, PhiError> {
        let idx = self.base.indices_in(ambient).ok_or(PhiError::NotSubset)?;
        let mut pairs: BTreeSet<(usize, usize)> = self.pairs.iter().map(|&(i, j)| (idx[i], idx[j])).collect();
        for &(i, j) in unit_graph(ambient).edges() {
            if !pairs.contains(&(i, j)) && !pairs.contains(&(j, i)) {
                pairs.insert((i, j));
            }
        }
        Orientation::new(ambient.clone(), pairs)
    }

    /// Unit edges on which the two orientations point opposite ways,
    /// lexicographically by `(i, j)` with `(i, j) ∈ self`.
    pub fn disagreements(&self, other: &Orientation<C>) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .copied()
            .filter(|&(i, j)| !self.pairs.contains(&(j, i)) && other.pairs.contains(&(j, i)) && !other.pairs.contains(&(i, j)))
            .collect()
    }
}

/// A named, duplicate-free family of orientations over one base.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct OrientationFamily<C> {
    pub name: String,
    members: Vec<Orientation<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family is empty")]
    EmptyFamily,
    #[error("members {0} and {1} are the same orientation")]
    Duplicate(usize, usize),
    #[error("member {0} is over a different base")]
    BaseMismatch(usize),
}

impl<C: Coord> OrientationFamily<C> {
    pub fn new(name: impl Into<String>, members: Vec<Orientation<C>>) -> Result<Self, FamilyError> {
        let first = members.first().ok_or(FamilyError::EmptyFamily)?;
        for (k, m) in members.iter().enumerate() {
            if !m.base.same_as(&first.base) {
                return Err(FamilyError::BaseMismatch(k));
            }
            if let Some(j) = members[..k].iter().position(|o| o.pairs == m.pairs) {
                return Err(FamilyError::Duplicate(j, k));
            }
        }
        Ok(OrientationFamily { name: name.into(), members })
    }

    pub fn base(&self) -> &PointSet<C> {
        &self.members[0].base
    }

    pub fn members(&self) -> &[Orientation<C>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiMode {
    All,
    Count,
    Sample { seed: u64, k: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiEnumeration<C> {
    Members(Vec<Orientation<C>>),
    Count(u128),
}

/// Largest number of free edges `PhiMode::All` will expand.
pub const MAX_LISTED_FREE_EDGES: usize = 20;

/// Unit edges other than the three triangle edges, in unit-graph order.
pub fn free_edges<C: Coord>(base: &PointSet<C>) -> Result<Vec<(usize, usize)>, PhiError> {
    let [p0, p1, p2] = triangle_indices(base).ok_or(PhiError::MissingTriangle)?;
    let tri = [(p0, p1), (p0, p2), (p1, p2)].map(|(a, b)| (a.min(b), a.max(b)));
    Ok(unit_graph(base).edges().iter().copied().filter(|e| !tri.contains(e)).collect())
}

fn forced_pairs([p0, p1, p2]: [usize; 3]) -> BTreeSet<(usize, usize)> {
    let mut s: BTreeSet<_> = required_doubled([p0, p1, p2]).into_iter().collect();
    s.insert((p1, p2));
    s
}

/// The member whose `k`-th free edge `(i, j)` is reversed to `(j, i)`
/// exactly when `flip(k)`.
pub fn orientation_from_bits<C: Coord>(base: &PointSet<C>, flip: impl Fn(usize) -> bool) -> Result<Orientation<C>, PhiError> {
    let tri = triangle_indices(base).ok_or(PhiError::MissingTriangle)?;
    let mut pairs = forced_pairs(tri);
    for (k, (i, j)) in free_edges(base)?.into_iter().enumerate() {
        pairs.insert(if flip(k) { (j, i) } else { (i, j) });
    }
    Ok(Orientation { base: base.clone(), pairs })
}

/// Bit `edge` of sample `sample` for `seed`: one word of a ChaCha8 stream
/// addressed by position, so it does not depend on what else was drawn.
fn sample_bit(seed: u64, sample: u64, edge: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng.set_word_pos(edge as u128);
    rng.next_u32() & 1 == 1
}

/// Lists, counts or samples Φ on `base`. There are `2^(m−3)` members for
/// `m` unit edges. Sampling draws candidates 0, 1, 2, … and keeps the
/// first `k` distinct ones; `k` at or above the count returns everything.
pub fn enumerate_phi<C: Coord>(base: &PointSet<C>, mode: PhiMode) -> Result<PhiEnumeration<C>, PhiError> {
    let free = free_edges(base)?.len();
    let count = 1u128.checked_shl(free as u32).unwrap_or(u128::MAX);
    let list_all = || {
        if free > MAX_LISTED_FREE_EDGES {
            return Err(PhiError::TooMany(count));
        }
        (0u64..1 << free).map(|mask| orientation_from_bits(base, |k| mask >> k & 1 == 1)).collect::<Result<Vec<_>, _>>()
    };
    match mode {
        PhiMode::Count => Ok(PhiEnumeration::Count(count)),
        PhiMode::All => Ok(PhiEnumeration::Members(list_all()?)),
        PhiMode::Sample { k, .. } if k as u128 >= count => Ok(PhiEnumeration::Members(list_all()?)),
        PhiMode::Sample { seed, k } => {
            let mut seen = BTreeSet::new();
            let mut out = Vec::with_capacity(k);
            let mut sample = 0u64;
            while out.len() < k {
                let o = orientation_from_bits(base, |e| sample_bit(seed, sample, e))?;
                sample += 1;
                if seen.insert(o.pairs.clone()) {
                    out.push(o);
                }
            }
            Ok(PhiEnumeration::Members(out))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservationViolation {
    /// Triangle point `p` (0, 1 or 2) is moved.
    MovesTriangle { hom: Vec<usize>, p: usize },
    /// A unit pair of the source maps to a non-unit pair.
    BreaksUnit { hom: Vec<usize>, a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationReport {
    pub homs: usize,
    pub truncated: bool,
    pub search_nodes: u64,
    pub violations: Vec<ObservationViolation>,
}

impl ObservationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates every homomorphism `⟨X, S|X⟩ → ⟨codomain, Z|codomain⟩` and
/// checks that each fixes the triangle and keeps unit pairs at unit
/// distance. Hom vectors index `codomain`.
pub fn observation_verify<C: Coord>(
    x: &PointSet<C>,
    s: &Orientation<C>,
    z: &Orientation<C>,
    codomain: &PointSet<C>,
    limit: Option<usize>,
) -> Result<ObservationReport, PhiError> {
    if !s.base.same_as(&z.base) {
        return Err(PhiError::BaseMismatch);
    }
    let tx = triangle_indices(x).ok_or(PhiError::MissingTriangle)?;
    let tc = triangle_indices(codomain).ok_or(PhiError::MissingTriangle)?;
    let src = s.restrict(x)?;
    let dst = z.restrict(codomain)?;
    let found = enumerate_homs(&src, &dst, &[], limit).expect("no pins");
    let mut violations = Vec::new();
    for Hom { mapping } in &found.homs {
        for p in 0..3 {
            if mapping[tx[p]] != tc[p] {
                violations.push(ObservationViolation::MovesTriangle { hom: mapping.clone(), p });
            }
        }
        for a in 0..x.len() {
            for b in a + 1..x.len() {
                if is_unit(&x[a], &x[b]) && !is_unit(&codomain[mapping[a]], &codomain[mapping[b]]) {
                    violations.push(ObservationViolation::BreaksUnit { hom: mapping.clone(), a, b });
                }
            }
        }
    }
    Ok(ObservationReport { homs: found.homs.len(), truncated: found.truncated, search_nodes: found.nodes, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::QScalar;
    use crate::plane::{lattice_ball, triangle_set};

    type Q = QScalar;

    fn tri_pairs() -> BTreeSet<(usize, usize)> {
        [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2)].into_iter().collect()
    }

    #[test]
    fn check_phi_clauses() {
        let t = triangle_set::<Q>();
        assert_eq!(check_phi(&t, &tri_pairs()), Ok(None));
        let mut extra = tri_pairs();
        extra.insert((2, 1));
        assert_eq!(check_phi(&t, &extra), Ok(Some(PhiViolation::ExtraDoubled { i: 1, j: 2 })));
        let mut dropped = tri_pairs();
        dropped.remove(&(1, 2));
        assert_eq!(check_phi(&t, &dropped), Ok(Some(PhiViolation::Uncovered { i: 1, j: 2 })));
        let mut single = tri_pairs();
        single.remove(&(2, 0));
        assert_eq!(check_phi(&t, &single), Ok(Some(PhiViolation::MissingDoubled { i: 2, j: 0 })));
        let reversed: BTreeSet<_> = [(0, 1), (1, 0), (0, 2), (2, 0), (2, 1)].into_iter().collect();
        assert_eq!(check_phi(&t, &reversed), Ok(Some(PhiViolation::TriangleDirection)));
        let b = lattice_ball::<Q>(1, true);
        let mut far = tri_pairs();
        far.insert((1, 4));
        assert_eq!(check_phi(&b, &far), Ok(Some(PhiViolation::NotUnit { i: 1, j: 4 })));
        let no_tri = PointSet::<Q>::from_points([t[0].clone(), t[1].clone()]);
        assert_eq!(check_phi(&no_tri, &BTreeSet::new()), Err(PhiError::MissingTriangle));
    }

    #[test]
    fn counts() {
        let t = triangle_set::<Q>();
        let PhiEnumeration::Members(m) = enumerate_phi(&t, PhiMode::All).unwrap() else { panic!() };
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].pairs(), &tri_pairs());
        let b = lattice_ball::<Q>(1, true);
        assert_eq!(unit_graph(&b).edges().len(), 12);
        assert_eq!(enumerate_phi(&b, PhiMode::Count).unwrap(), PhiEnumeration::Count(512));
        let PhiEnumeration::Members(all) = enumerate_phi(&b, PhiMode::All).unwrap() else { panic!() };
        assert_eq!(all.len(), 512);
        for o in &all {
            assert_eq!(check_phi(o.base(), o.pairs()), Ok(None));
            assert_eq!(o.pairs().len(), 14);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let b = lattice_ball::<Q>(1, true);
        let a = enumerate_phi(&b, PhiMode::Sample { seed: 0, k: 2 }).unwrap();
        let again = enumerate_phi(&b, PhiMode::Sample { seed: 0, k: 2 }).unwrap();
        assert_eq!(a, again);
        let PhiEnumeration::Members(m) = a else { panic!() };
        assert_eq!(m.len(), 2);
        assert_ne!(m[0].pairs(), m[1].pairs());
        let other = enumerate_phi(&b, PhiMode::Sample { seed: 1, k: 2 }).unwrap();
        assert_ne!(other, again);
    }

    #[test]
    fn observation_on_triangle() {
        let t = triangle_set::<Q>();
        let s = Orientation::new(t.clone(), tri_pairs()).unwrap();
        let r = observation_verify(&t, &s, &s, &t, None).unwrap();
        assert_eq!(r.homs, 1);
        assert!(r.passed());
        let pinned = enumerate_homs(&s.relation(), &s.relation(), &[(1, 2)], None).unwrap();
        assert!(pinned.homs.is_empty());
    }

    #[test]
    fn observation_on_ball_samples() {
        let b = lattice_ball::<Q>(1, true);
        let PhiEnumeration::Members(m) = enumerate_phi(&b, PhiMode::Sample { seed: 3, k: 4 }).unwrap() else { panic!() };
        for s in &m {
            for z in &m {
                let r = observation_verify(&b, s, z, &b, None).unwrap();
                assert!(r.passed(), "{:?}", r.violations);
                assert!(!r.truncated);
            }
            assert!(observation_verify(&b, s, s, &b, None).unwrap().homs >= 1);
        }
    }

    #[test]
    fn extension_and_disagreement() {
        let b = lattice_ball::<Q>(1, true);
        let s = orientation_from_bits(&b, |_| false).unwrap();
        let z = orientation_from_bits(&b, |k| k == 4).unwrap();
        let e = free_edges(&b).unwrap()[4];
        assert_eq!(s.disagreements(&z), vec![e]);
        assert!(s.disagreements(&s).is_empty());
        let big = lattice_ball::<Q>(2, true);
        let se = s.extend(&big).unwrap();
        let ze = z.extend(&big).unwrap();
        assert_eq!(se.pairs().len(), 5 + 42 - 3);
        assert_eq!(se.disagreements(&ze).len(), 1);
        assert_eq!(OrientationFamily::new("J", vec![s.clone(), s.clone()]), Err(FamilyError::Duplicate(0, 1)));
        assert_eq!(OrientationFamily::<Q>::new("J", vec![]), Err(FamilyError::EmptyFamily));
    }
}
