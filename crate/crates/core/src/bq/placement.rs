use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::BqError;
use crate::numeric::{Coord, Point};
use crate::plane::{unit_graph, PointSet, UnitGraph};

/// How to place a point set one piece at a time so that every piece has
/// finitely many positions given the pieces before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementOrder {
    /// Unit edge placed first, at (0,0) and (1,0).
    pub start: (usize, usize),
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// Place `vertex` on the unit circles of `anchors` (all its placed unit
    /// neighbours, at least two).
    Anchor { vertex: usize, anchors: Vec<usize> },
    /// Place the rigid body `body` (which starts at `pivot`) by turning it
    /// about the placed `pivot` until its `links` (body vertex, placed
    /// vertex) are unit.
    Hinge { pivot: usize, body: PlacementOrder, links: Vec<(usize, usize)> },
}

impl PlacementOrder {
    /// Vertices in placement order.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = vec![self.start.0, self.start.1];
        for s in &self.steps {
            match s {
                Step::Anchor { vertex, .. } => out.push(*vertex),
                Step::Hinge { body, .. } => out.extend(body.vertices().into_iter().skip(1)),
            }
        }
        out
    }

    /// Checks the order covers each vertex of `t` once and every step is
    /// justified by what was placed before it.
    pub fn is_valid_for<C: Coord>(&self, t: &PointSet<C>) -> bool {
        let g = unit_graph(t);
        let mut placed = BTreeSet::new();
        self.check(&g, &mut placed) && placed.len() == t.len()
    }

    fn check<C: Coord>(&self, g: &UnitGraph<C>, placed: &mut BTreeSet<usize>) -> bool {
        let (a, b) = self.start;
        if !g.has_edge(a, b) || !placed.insert(b) {
            return false;
        }
        placed.insert(a);
        for s in &self.steps {
            match s {
                Step::Anchor { vertex, anchors } => {
                    let expect: Vec<usize> = g.neighbors(*vertex).iter().copied().filter(|w| placed.contains(w)).collect();
                    let mut sorted = expect.clone();
                    sorted.sort_unstable();
                    if anchors.len() < 2 || *anchors != sorted || !placed.insert(*vertex) {
                        return false;
                    }
                }
                Step::Hinge { pivot, body, links } => {
                    if body.start.0 != *pivot || !placed.contains(pivot) || links.is_empty() {
                        return false;
                    }
                    let mut inner = BTreeSet::new();
                    if !body.check(g, &mut inner) || inner.iter().any(|v| v != pivot && placed.contains(v)) {
                        return false;
                    }
                    if !links.iter().all(|&(b, p)| inner.contains(&b) && placed.contains(&p) && g.has_edge(b, p)) {
                        return false;
                    }
                    placed.extend(inner);
                }
            }
        }
        true
    }
}

fn anchors_of<C: Coord>(g: &UnitGraph<C>, v: usize, placed: &[bool]) -> Vec<usize> {
    let mut a: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| placed[w]).collect();
    a.sort_unstable();
    a
}

/// Unplaced vertex with the most placed unit neighbours (at least two),
/// lowest index on ties, restricted to `allowed`.
fn best_anchor<C: Coord>(g: &UnitGraph<C>, placed: &[bool], allowed: &[bool]) -> Option<(Vec<usize>, usize)> {
    (0..placed.len())
        .filter(|&v| allowed[v] && !placed[v])
        .map(|v| (anchors_of(g, v, placed), v))
        .filter(|(a, _)| a.len() >= 2)
        .max_by(|(a, v), (b, w)| a.len().cmp(&b.len()).then(w.cmp(v)))
}

fn anchor_closure<C: Coord>(g: &UnitGraph<C>, placed: &mut [bool], allowed: &[bool], steps: &mut Vec<Step>) {
    while let Some((anchors, vertex)) = best_anchor(g, placed, allowed) {
        placed[vertex] = true;
        steps.push(Step::Anchor { vertex, anchors });
    }
}

/// First hinge whose body avoids `avoid`, trying pivots and then their
/// unplaced neighbours in index order.
fn find_hinge<C: Coord>(g: &UnitGraph<C>, placed: &[bool], avoid: &[bool]) -> Option<Step> {
    let n = placed.len();
    for pivot in (0..n).filter(|&h| placed[h]) {
        for &u in g.neighbors(pivot).iter().filter(|&&u| !placed[u] && !avoid[u]) {
            let allowed: Vec<bool> = (0..n).map(|v| v == pivot || !placed[v]).collect();
            let mut inner = vec![false; n];
            inner[pivot] = true;
            inner[u] = true;
            let mut steps = Vec::new();
            anchor_closure(g, &mut inner, &allowed, &mut steps);
            if (0..n).any(|v| inner[v] && avoid[v]) {
                continue;
            }
            let mut links = Vec::new();
            for b in (0..n).filter(|&b| inner[b] && b != pivot) {
                for &p in g.neighbors(b) {
                    if placed[p] && p != pivot {
                        links.push((b, p));
                    }
                }
            }
            links.sort_unstable();
            if !links.is_empty() {
                let body = PlacementOrder { start: (pivot, u), steps };
                return Some(Step::Hinge { pivot, body, links });
            }
        }
    }
    None
}

/// Greedy order from `start`. A hinge is taken as soon as one is
/// constrained and its body does not contain a vertex that could be
/// anchored directly; otherwise the best-anchored vertex goes next.
fn greedy_from<C: Coord>(g: &UnitGraph<C>, start: (usize, usize)) -> Result<PlacementOrder, usize> {
    let n = g.len();
    let mut placed = vec![false; n];
    placed[start.0] = true;
    placed[start.1] = true;
    let all = vec![true; n];
    let mut steps = Vec::new();
    while !placed.iter().all(|&p| p) {
        let anchorable: Vec<bool> = (0..n).map(|v| !placed[v] && anchors_of(g, v, &placed).len() >= 2).collect();
        if let Some(step) = find_hinge(g, &placed, &anchorable) {
            if let Step::Hinge { body, .. } = &step {
                for v in body.vertices() {
                    placed[v] = true;
                }
            }
            steps.push(step);
        } else if let Some((anchors, vertex)) = best_anchor(g, &placed, &all) {
            placed[vertex] = true;
            steps.push(Step::Anchor { vertex, anchors });
        } else {
            return Err(placed.iter().position(|&p| !p).expect("some unplaced"));
        }
    }
    Ok(PlacementOrder { start, steps })
}

/// A placement order for `t`, trying start edges in lexicographic order.
/// Both `x` and `y` must belong to `t`; every vertex is placed.
pub fn placement_order<C: Coord>(t: &PointSet<C>, x: &Point<C>, y: &Point<C>) -> Result<PlacementOrder, BqError> {
    if t.index_of(x).is_none() || t.index_of(y).is_none() {
        return Err(BqError::MissingPoint);
    }
    let g = unit_graph(t);
    order_for_graph(&g)
}

pub(crate) fn order_for_graph<C: Coord>(g: &UnitGraph<C>) -> Result<PlacementOrder, BqError> {
    if g.len() < 2 || !g.is_connected() {
        return Err(BqError::NotConnected);
    }
    let mut first_stuck = None;
    for &e in g.edges() {
        match greedy_from(g, e) {
            Ok(order) => return Ok(order),
            Err(v) => {
                first_stuck.get_or_insert(v);
            }
        }
    }
    Err(BqError::NotAnchored { vertex: first_stuck.expect("connected graph with ≥ 2 points has an edge") })
}
