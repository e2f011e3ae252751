use std::cmp::Ordering;

use super::placement::{PlacementOrder, Step};
use super::BqError;
use crate::numeric::{circle_intersect, is_unit, Backend, Coord, Point};
use crate::plane::PointSet;

/// All unit-preserving maps of a point set, one per isometry class.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitMaps<C> {
    /// Image vectors indexed like the point set, sorted lexicographically.
    pub maps: Vec<Vec<Point<C>>>,
    /// Complete placements reached before identifying isometric ones.
    pub branches: u64,
    /// Candidate placements rejected by a unit constraint.
    pub pruned: u64,
}

type Partial<C> = Vec<Option<Point<C>>>;

struct Run<'a, C> {
    t: &'a PointSet<C>,
    nodes: u64,
    branches: u64,
    pruned: u64,
    limit: Option<u64>,
}

fn cmp_coord<C: Coord>(a: &C, b: &C) -> Ordering {
    match C::BACKEND {
        Backend::Exact => a.cmp_value(b),
        Backend::Float => a.to_f64().total_cmp(&b.to_f64()),
    }
}

fn cmp_partial<C: Coord>(a: &Partial<C>, b: &Partial<C>) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        let o = match (p, q) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(p), Some(q)) => cmp_coord(&p.x, &q.x).then_with(|| cmp_coord(&p.y, &q.y)),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

fn same_partial<C: Coord>(a: &Partial<C>, b: &Partial<C>) -> bool {
    a.iter().zip(b).all(|(p, q)| match (p, q) {
        (None, None) => true,
        (Some(p), Some(q)) => p.approx_eq(q),
        _ => false,
    })
}

fn mirror<C: Coord>(m: &Partial<C>) -> Partial<C> {
    m.iter().map(|p| p.as_ref().map(Point::mirror_y)).collect()
}

/// Reflects so the first image off the x-axis lies above it.
fn normalize_mirror<C: Coord>(m: Partial<C>) -> Partial<C> {
    let first = m.iter().flatten().map(|p| p.y.sign()).find(|s| *s != Ordering::Equal);
    if first == Some(Ordering::Less) {
        mirror(&m)
    } else {
        m
    }
}

fn rotate<C: Coord>(v: &Point<C>, cos: &C, sin: &C) -> Point<C> {
    Point::new(cos.clone() * v.x.clone() - sin.clone() * v.y.clone(), sin.clone() * v.x.clone() + cos.clone() * v.y.clone())
}

fn placed<C: Coord>(m: &Partial<C>, v: usize) -> &Point<C> {
    m[v].as_ref().expect("placed earlier in the order")
}

impl<C: Coord> Run<'_, C> {
    fn tick(&mut self) -> Result<(), BqError> {
        self.nodes += 1;
        match self.limit {
            Some(l) if self.nodes > l => Err(BqError::BranchLimit(l)),
            _ => Ok(()),
        }
    }

    /// Maps of the vertices covered by `order`, normalized and deduplicated.
    fn maps(&mut self, order: &PlacementOrder) -> Result<Vec<Partial<C>>, BqError> {
        let bodies = order
            .steps
            .iter()
            .map(|s| match s {
                Step::Hinge { body, .. } => self.maps(body).map(Some),
                Step::Anchor { .. } => Ok(None),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut m: Partial<C> = vec![None; self.t.len()];
        let tau = self.t.iter().map(|p| p.x.tolerance().max(p.y.tolerance())).fold(0.0, f64::max);
        m[order.start.0] = Some(Point::origin().with_tolerance(tau));
        m[order.start.1] = Some(Point::new(C::one(), C::zero()).with_tolerance(tau));
        let mut out = Vec::new();
        self.dfs(&order.steps, &bodies, 0, &mut m, &mut out)?;
        let mut out: Vec<Partial<C>> = out.into_iter().map(normalize_mirror).collect();
        if C::BACKEND == Backend::Float {
            // Sorting floats cannot bring τ-equal maps together reliably.
            let mut kept: Vec<Partial<C>> = Vec::new();
            for m in out {
                if !kept.iter().any(|k| same_partial(k, &m)) {
                    kept.push(m);
                }
            }
            out = kept;
        }
        out.sort_by(cmp_partial);
        out.dedup_by(|a, b| same_partial(a, b));
        Ok(out)
    }

    fn dfs(
        &mut self,
        steps: &[Step],
        bodies: &[Option<Vec<Partial<C>>>],
        k: usize,
        m: &mut Partial<C>,
        out: &mut Vec<Partial<C>>,
    ) -> Result<(), BqError> {
        let Some(step) = steps.get(k) else {
            self.branches += 1;
            out.push(m.clone());
            return Ok(());
        };
        self.tick()?;
        match step {
            Step::Anchor { vertex, anchors } => {
                let imgs: Vec<Point<C>> = anchors.iter().map(|&w| placed(m, w).clone()).collect();
                let (a, b) = (0..imgs.len())
                    .flat_map(|i| (i + 1..imgs.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !imgs[i].approx_eq(&imgs[j]))
                    .ok_or(BqError::Flexible { vertex: *vertex })?;
                let cands = circle_intersect(&imgs[a], &C::one(), &imgs[b], &C::one())?;
                if cands.is_empty() {
                    self.pruned += 1;
                }
                for c in cands {
                    if imgs.iter().all(|w| is_unit(&c, w)) {
                        m[*vertex] = Some(c);
                        self.dfs(steps, bodies, k + 1, m, out)?;
                        m[*vertex] = None;
                    } else {
                        self.pruned += 1;
                    }
                }
            }
            Step::Hinge { pivot, links, body } => {
                let hp = placed(m, *pivot).clone();
                let members = body.vertices();
                for bm in bodies[k].as_ref().expect("body maps computed") {
                    for bm in [bm.clone(), mirror(bm)] {
                        // Body maps put the pivot at the origin.
                        let rel = |v: usize| placed(&bm, v).clone();
                        let link = links.iter().find(|&&(b, p)| !rel(b).norm2().is_zero_value() && !placed(m, p).approx_eq(&hp));
                        let Some(&(lb, lp)) = link else {
                            // Every link is degenerate: either one fails, or the body spins freely.
                            let satisfied = links.iter().all(|&(b, p)| {
                                let r2 = rel(b).norm2();
                                if placed(m, p).approx_eq(&hp) {
                                    r2.approx_eq(&C::one())
                                } else {
                                    is_unit(&hp, placed(m, p))
                                }
                            });
                            if satisfied {
                                return Err(BqError::Flexible { vertex: links[0].0 });
                            }
                            self.pruned += 1;
                            continue;
                        };
                        let a = rel(lb);
                        let r2 = a.norm2();
                        let cands = circle_intersect(&hp, &r2, placed(m, lp), &C::one())?;
                        if cands.is_empty() {
                            self.pruned += 1;
                        }
                        for c in cands {
                            let d = c.sub(&hp);
                            let cos = a.dot(&d).checked_div(&r2)?;
                            let sin = a.cross(&d).checked_div(&r2)?;
                            for &v in members.iter().skip(1) {
                                m[v] = Some(hp.add(&rotate(&rel(v), &cos, &sin)));
                            }
                            if links.iter().all(|&(b, p)| is_unit(placed(m, b), placed(m, p))) {
                                self.dfs(steps, bodies, k + 1, m, out)?;
                            } else {
                                self.pruned += 1;
                            }
                            for &v in members.iter().skip(1) {
                                m[v] = None;
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Every map `f` of `t` into the plane with `|f(a) − f(b)| = 1` whenever
/// `|a − b| = 1`, up to isometry.
///
/// Each map has `f(t₀) = (0,0)`, `f(t₁) = (1,0)` for the start edge
/// `(t₀, t₁)` and its first image off the x-axis above it. If `limit` is
/// set, more than that many search nodes is an error.
pub fn enumerate_unit_maps<C: Coord>(t: &PointSet<C>, order: &PlacementOrder, limit: Option<u64>) -> Result<UnitMaps<C>, BqError> {
    if !order.is_valid_for(t) {
        return Err(BqError::InvalidOrder);
    }
    let mut run = Run { t, nodes: 0, branches: 0, pruned: 0, limit };
    let maps = run.maps(order)?.into_iter().map(|m| m.into_iter().map(|p| p.expect("order covers every vertex")).collect()).collect();
    Ok(UnitMaps { maps, branches: run.branches, pruned: run.pruned })
}

/// Checks `f` keeps every unit pair of `t` at unit distance.
pub fn preserves_units<C: Coord>(t: &PointSet<C>, f: &[Point<C>]) -> bool {
    (0..t.len()).all(|i| (i + 1..t.len()).all(|j| !is_unit(&t[i], &t[j]) || is_unit(&f[i], &f[j])))
}
