use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::search::{enumerate_homs, exists_hom};
use super::{RelError, RelStruct};

/// A candidate witness set A(x, y): a subset containing `x`, and the target
/// `y` that no relation-preserving map of the subset may send `x` to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub subset: BTreeSet<usize>,
    pub x: usize,
    pub y: usize,
}

impl WitnessSet {
    pub fn new<I: IntoIterator<Item = usize>>(subset: I, x: usize, y: usize) -> Self {
        WitnessSet { subset: subset.into_iter().collect(), x, y }
    }

    pub fn full(n: usize, x: usize, y: usize) -> Self {
        Self::new(0..n, x, y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Valid,
    /// A map on the subset, with `x ↦ y`, preserving the induced relation.
    Counterexample {
        map: BTreeMap<usize, usize>,
    },
}

impl WitnessOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, WitnessOutcome::Valid)
    }
}

/// Decides whether `w` is a witness: no total map `g: subset → universe`
/// with `g(x) = y` carries `pairs ∩ subset²` into the relation.
///
/// `x = y` is accepted; the identity then always refutes the witness.
pub fn check_witness(s: &RelStruct, w: &WitnessSet) -> Result<WitnessOutcome, RelError> {
    if let Some(&e) = w.subset.iter().find(|&&e| e >= s.n()) {
        return Err(RelError::WitnessOutOfRange(e));
    }
    if w.y >= s.n() {
        return Err(RelError::WitnessOutOfRange(w.y));
    }
    if !w.subset.contains(&w.x) {
        return Err(RelError::WitnessMissingX(w.x));
    }
    let sub = s.induced(&w.subset);
    let order: Vec<usize> = w.subset.iter().copied().collect();
    let xi = order.binary_search(&w.x).expect("x in subset");
    Ok(match exists_hom(&sub, s, &[(xi, w.y)])? {
        None => WitnessOutcome::Valid,
        Some(h) => WitnessOutcome::Counterexample { map: order.iter().copied().zip(h.mapping).collect() },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinWitness {
    pub witness: WitnessSet,
    /// Found by exhaustive smallest-first search, so of minimum size.
    pub minimal: bool,
    pub checks: u64,
}

/// Smallest witness for `(x, y)` within `budget` witness checks.
///
/// One check confirms the full universe is a witness. If every subset
/// containing `x` fits in the remaining budget they are scanned
/// smallest-first and the first valid one is returned as minimal; otherwise
/// the full universe is shrunk greedily, one element at a time in index
/// order, until the budget runs out.
pub fn find_min_witness(s: &RelStruct, x: usize, y: usize, budget: u64) -> Result<MinWitness, RelError> {
    if x == y {
        return Err(RelError::SameElements);
    }
    if budget == 0 {
        return Err(RelError::BudgetExhausted);
    }
    let n = s.n();
    let full = WitnessSet::full(n, x, y);
    if !check_witness(s, &full)?.is_valid() {
        return Err(RelError::NoWitnessExists(x, y));
    }
    let mut checks = 1u64;
    let others: Vec<usize> = (0..n).filter(|&e| e != x).collect();
    let subsets = 1u64.checked_shl(others.len() as u32).unwrap_or(u64::MAX);
    if subsets <= budget - checks {
        for k in 0..=others.len() {
            for combo in Combinations::new(others.len(), k) {
                let w = WitnessSet::new(combo.iter().map(|&c| others[c]).chain([x]), x, y);
                checks += 1;
                if check_witness(s, &w)?.is_valid() {
                    return Ok(MinWitness { witness: w, minimal: true, checks });
                }
            }
        }
        unreachable!("the full universe is a valid witness");
    }
    let mut current = full;
    for &e in &others {
        if checks >= budget {
            break;
        }
        let mut trial = current.clone();
        trial.subset.remove(&e);
        checks += 1;
        if check_witness(s, &trial)?.is_valid() {
            current = trial;
        }
    }
    Ok(MinWitness { witness: current, minimal: false, checks })
}

/// k-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidReport {
    pub rigid: bool,
    /// Endomorphisms found (at most the limit).
    pub endomorphisms: usize,
    pub truncated: bool,
}

/// Counts endomorphisms up to `limit`; rigid iff the identity is the only one.
pub fn rigidity(s: &RelStruct, limit: Option<usize>) -> RigidReport {
    let r = enumerate_homs(s, s, &[], limit).expect("no pins");
    RigidReport { rigid: !r.truncated && r.homs.len() == 1, endomorphisms: r.homs.len(), truncated: r.truncated }
}

pub fn is_rigid(s: &RelStruct) -> bool {
    rigidity(s, Some(1)).rigid
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub x: usize,
    pub y: usize,
    pub size: usize,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRigidityReport {
    pub all_pairs_witnessed: bool,
    pub rigid: bool,
    /// Ordered pairs `x ≠ y` with no witness.
    pub unwitnessed: Vec<(usize, usize)>,
    pub witnesses: Vec<PairWitness>,
}

/// Computes, independently, whether every ordered pair `x ≠ y` has a
/// witness and whether the structure is rigid.
pub fn witness_rigidity_check(s: &RelStruct, budget: u64) -> WitnessRigidityReport {
    let n = s.n();
    let mut unwitnessed = Vec::new();
    let mut witnesses = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            match find_min_witness(s, x, y, budget.max(1)) {
                Ok(m) => witnesses.push(PairWitness { x, y, size: m.witness.subset.len(), minimal: m.minimal }),
                Err(RelError::NoWitnessExists(..)) => unwitnessed.push((x, y)),
                Err(e) => unreachable!("find_min_witness: {e}"),
            }
        }
    }
    WitnessRigidityReport { all_pairs_witnessed: unwitnessed.is_empty(), rigid: is_rigid(s), unwitnessed, witnesses }
}
