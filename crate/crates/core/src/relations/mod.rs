//! Finite binary relational structures and homomorphism search.

mod bitset;
mod search;
mod witness;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use search::{enumerate_homs, exists_hom, HomSearch};
pub use witness::{
    check_witness, find_min_witness, is_rigid, rigidity, witness_rigidity_check, MinWitness, PairWitness, RigidReport, WitnessOutcome,
    WitnessRigidityReport, WitnessSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("pair ({0}, {1}) is outside a universe of size {2}")]
    PairOutOfRange(usize, usize, usize),
    #[error("pin {0} ↦ {1} is out of range")]
    BadPin(usize, usize),
    #[error("witness subset does not contain its distinguished element {0}")]
    WitnessMissingX(usize),
    #[error("witness element {0} is outside the universe")]
    WitnessOutOfRange(usize),
    #[error("some homomorphism of the whole structure sends {0} to {1}; no witness exists")]
    NoWitnessExists(usize, usize),
    #[error("witness search ran out of budget")]
    BudgetExhausted,
    #[error("x and y must differ")]
    SameElements,
    #[error("{0} labels for {1} elements")]
    LabelCount(usize, usize),
}

/// External name of a universe element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Product { point: usize, member: usize },
    Name(String),
}

/// A binary relation on `{0, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRelStruct")]
pub struct RelStruct {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Label>>,
}

#[derive(Deserialize)]
struct RawRelStruct {
    n: usize,
    pairs: Vec<(usize, usize)>,
    #[serde(default)]
    labels: Option<Vec<Label>>,
}

impl TryFrom<RawRelStruct> for RelStruct {
    type Error = RelError;
    fn try_from(raw: RawRelStruct) -> Result<Self, RelError> {
        if let Some(l) = &raw.labels {
            if l.len() != raw.n {
                return Err(RelError::LabelCount(l.len(), raw.n));
            }
        }
        let s = RelStruct::new(raw.n, raw.pairs)?;
        Ok(match raw.labels {
            Some(l) => s.with_labels(l),
            None => s,
        })
    }
}

impl RelStruct {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self, RelError> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= n || j >= n) {
            return Err(RelError::PairOutOfRange(i, j, n));
        }
        Ok(RelStruct { n, pairs, labels: None })
    }

    pub fn empty(n: usize) -> Self {
        RelStruct { n, pairs: BTreeSet::new(), labels: None }
    }

    /// `0 → 1 → … → n−1 → 0`.
    pub fn directed_cycle(n: usize) -> Self {
        RelStruct::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("in range")
    }

    /// Relation whose pairs are the set bits of `mask`, bit `i·n + j`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let pairs = (0..n * n).filter(|b| mask >> b & 1 == 1).map(|b| (b / n, b % n));
        RelStruct::new(n, pairs).expect("in range")
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn has_pair(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    /// Substructure induced on `subset` (sorted, deduplicated), re-indexed
    /// `0..k` in ascending order of the original indices.
    pub fn induced(&self, subset: &BTreeSet<usize>) -> RelStruct {
        let idx: Vec<usize> = subset.iter().copied().collect();
        let pos = |v: usize| idx.binary_search(&v).ok();
        let pairs = self.pairs.iter().filter_map(|&(i, j)| Some((pos(i)?, pos(j)?)));
        RelStruct::new(idx.len(), pairs).expect("in range")
    }

    pub fn is_hom_to(&self, dst: &RelStruct, mapping: &[usize]) -> bool {
        mapping.len() == self.n
            && mapping.iter().all(|&v| v < dst.n)
            && self.pairs.iter().all(|&(i, j)| dst.has_pair(mapping[i], mapping[j]))
    }
}

/// A homomorphism, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hom {
    pub mapping: Vec<usize>,
}

impl Hom {
    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &v)| i == v)
    }
}
