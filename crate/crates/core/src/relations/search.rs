use std::collections::VecDeque;

use super::bitset::{intersects, iter_bits, popcount, BitSet};
use super::{Hom, RelError, RelStruct};

/// Result of a homomorphism enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSearch {
    /// Homomorphisms found, sorted by image vector.
    pub homs: Vec<Hom>,
    /// More than `limit` homomorphisms exist; `homs` holds the first `limit`
    /// found by the search.
    pub truncated: bool,
    /// Search nodes visited.
    pub nodes: u64,
}

/// Every map `src → dst` extending `pin` that carries each pair of `src` to
/// a pair of `dst`, up to `limit`.
///
/// Backtracking over per-variable candidate sets, maintaining arc
/// consistency on every source pair after each choice; the next variable is
/// the one with fewest remaining candidates (ties by index).
pub fn enumerate_homs(src: &RelStruct, dst: &RelStruct, pin: &[(usize, usize)], limit: Option<usize>) -> Result<HomSearch, RelError> {
    for &(a, b) in pin {
        if a >= src.n() || b >= dst.n() {
            return Err(RelError::BadPin(a, b));
        }
    }
    let mut engine = Engine::new(src, dst, limit);
    if let Some(dom) = engine.initial_domains(pin) {
        engine.search(dom);
    }
    let mut found = engine.found;
    let truncated = limit.is_some_and(|l| found.len() > l);
    if let Some(l) = limit {
        found.truncate(l);
    }
    let mut homs: Vec<Hom> = found.into_iter().map(|mapping| Hom { mapping }).collect();
    homs.sort();
    Ok(HomSearch { homs, truncated, nodes: engine.nodes })
}

/// First homomorphism extending `pin`, if any.
pub fn exists_hom(src: &RelStruct, dst: &RelStruct, pin: &[(usize, usize)]) -> Result<Option<Hom>, RelError> {
    Ok(enumerate_homs(src, dst, pin, Some(1))?.homs.into_iter().next())
}

struct Engine {
    n: usize,
    words: usize,
    out_bits: Vec<BitSet>,
    in_bits: Vec<BitSet>,
    dst_loops: BitSet,
    dst_n: usize,
    src_loops: Vec<usize>,
    arcs: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    stop_at: Option<usize>,
    found: Vec<Vec<usize>>,
    nodes: u64,
}

impl Engine {
    fn new(src: &RelStruct, dst: &RelStruct, limit: Option<usize>) -> Self {
        let m = dst.n();
        let mut out_bits = vec![BitSet::empty(m); m];
        let mut in_bits = vec![BitSet::empty(m); m];
        let mut dst_loops = BitSet::empty(m);
        for &(a, b) in dst.pairs() {
            out_bits[a].insert(b);
            in_bits[b].insert(a);
            if a == b {
                dst_loops.insert(a);
            }
        }
        let n = src.n();
        let mut arcs = Vec::new();
        let mut incident = vec![Vec::new(); n];
        let mut src_loops = Vec::new();
        for &(i, j) in src.pairs() {
            if i == j {
                src_loops.push(i);
                continue;
            }
            incident[i].push(arcs.len());
            incident[j].push(arcs.len());
            arcs.push((i, j));
        }
        Engine {
            n,
            words: BitSet::words_for(m),
            out_bits,
            in_bits,
            dst_loops,
            dst_n: m,
            src_loops,
            arcs,
            incident,
            stop_at: limit.map(|l| l + 1),
            found: Vec::new(),
            nodes: 0,
        }
    }

    fn dom<'a>(&self, d: &'a [u64], v: usize) -> &'a [u64] {
        &d[v * self.words..(v + 1) * self.words]
    }

    fn initial_domains(&self, pin: &[(usize, usize)]) -> Option<Vec<u64>> {
        let full = BitSet::full(self.dst_n);
        let mut d = Vec::with_capacity(self.n * self.words);
        for _ in 0..self.n {
            d.extend_from_slice(full.words());
        }
        for &v in &self.src_loops {
            for (w, l) in d[v * self.words..(v + 1) * self.words].iter_mut().zip(self.dst_loops.words()) {
                *w &= l;
            }
        }
        for &(a, b) in pin {
            let slot = &mut d[a * self.words..(a + 1) * self.words];
            let keep = slot[b / 64] >> (b % 64) & 1;
            slot.iter_mut().for_each(|w| *w = 0);
            slot[b / 64] = keep << (b % 64);
        }
        let all: Vec<usize> = (0..self.arcs.len()).collect();
        self.propagate(&mut d, all).then_some(d)
    }

    /// AC-3 over source pairs. Returns false on a wipe-out.
    fn propagate(&self, d: &mut [u64], seed: Vec<usize>) -> bool {
        if (0..self.n).any(|v| popcount(self.dom(d, v)) == 0) {
            return false;
        }
        let mut queued = vec![false; self.arcs.len()];
        let mut queue = VecDeque::with_capacity(seed.len());
        for a in seed {
            if !queued[a] {
                queued[a] = true;
                queue.push_back(a);
            }
        }
        let mut scratch = vec![0u64; self.words];
        while let Some(arc) = queue.pop_front() {
            queued[arc] = false;
            let (i, j) = self.arcs[arc];
            for (var, other, forward) in [(i, j, true), (j, i, false)] {
                scratch.copy_from_slice(self.dom(d, var));
                let mut changed = false;
                for a in iter_bits(self.dom(d, var)) {
                    let support = if forward { &self.out_bits[a] } else { &self.in_bits[a] };
                    if !intersects(support.words(), self.dom(d, other)) {
                        scratch[a / 64] &= !(1 << (a % 64));
                        changed = true;
                    }
                }
                if changed {
                    if scratch.iter().all(|&w| w == 0) {
                        return false;
                    }
                    d[var * self.words..(var + 1) * self.words].copy_from_slice(&scratch);
                    for &a2 in &self.incident[var] {
                        if a2 != arc && !queued[a2] {
                            queued[a2] = true;
                            queue.push_back(a2);
                        }
                    }
                }
            }
        }
        true
    }

    /// Returns true once the stop count is reached.
    fn search(&mut self, d: Vec<u64>) -> bool {
        self.nodes += 1;
        let mut best: Option<(u32, usize)> = None;
        for v in 0..self.n {
            let c = popcount(self.dom(&d, v));
            if c > 1 && best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, v));
            }
        }
        let Some((_, var)) = best else {
            let mapping = (0..self.n).map(|v| iter_bits(self.dom(&d, v)).next().expect("singleton")).collect();
            self.found.push(mapping);
            return self.stop_at.is_some_and(|s| self.found.len() >= s);
        };
        let values: Vec<usize> = iter_bits(self.dom(&d, var)).collect();
        for val in values {
            let mut next = d.clone();
            let slot = &mut next[var * self.words..(var + 1) * self.words];
            slot.iter_mut().for_each(|w| *w = 0);
            slot[val / 64] = 1 << (val % 64);
            if self.propagate(&mut next, self.incident[var].clone()) && self.search(next) {
                return true;
            }
        }
        false
    }
}
