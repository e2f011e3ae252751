use serde::{Deserialize, Serialize};

use super::BqError;
use crate::numeric::{circle_intersect, dist2, is_unit, Coord, Point};
use crate::plane::{unit_graph, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    /// Unit segment plus the apex to its left.
    TriangleExtension,
    /// Two unit triangles on a shared edge `BC`; `AD` is the long diagonal.
    Rhombus,
    /// Two rhombi sharing `A`, turned until their far apexes `D`, `G` are
    /// a unit apart.
    MoserSpindle,
    /// `n` collinear unit hops.
    Chain(usize),
}

impl GadgetKind {
    pub fn edge_count(&self) -> usize {
        match self {
            GadgetKind::TriangleExtension => 3,
            GadgetKind::Rhombus => 5,
            GadgetKind::MoserSpindle => 11,
            GadgetKind::Chain(n) => *n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct Gadget<C> {
    pub kind: GadgetKind,
    pub points: PointSet<C>,
    /// One label per point: `A`, `B`, … or `P0`, `P1`, … for chains.
    pub labels: Vec<String>,
}

impl<C: Coord> Gadget<C> {
    pub fn point(&self, label: &str) -> Option<&Point<C>> {
        self.labels.iter().position(|l| l == label).map(|i| &self.points[i])
    }
}

/// Where each gadget sits when no attachment is given: the segment p₀p₁,
/// the spindle diagonal from the origin to (3/2, √3/2), or a chain along
/// the positive x-axis.
pub fn default_attach<C: Coord>(kind: GadgetKind) -> Vec<Point<C>> {
    let o = Point::origin();
    match kind {
        GadgetKind::TriangleExtension | GadgetKind::Rhombus => vec![o, Point::new(C::one(), C::zero())],
        GadgetKind::MoserSpindle => vec![o, Point::new(C::from_ratio(3, 2), C::sqrt3() * C::from_ratio(1, 2))],
        GadgetKind::Chain(n) => vec![o, Point::new(C::from_int(n as i64), C::zero())],
    }
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| char::from(b'A' + i as u8).to_string()).collect()
}

fn apex_left<C: Coord>(a: &Point<C>, b: &Point<C>) -> Point<C> {
    a.add(&b.sub(a).rot60())
}

/// Spindle points `[A, B, C, D, E, F, G]` for a diagonal `A`, `D` at
/// distance √3. `G` is `D` turned about `A` by the angle with cosine 5/6.
pub fn moser_spindle<C: Coord>(a: &Point<C>, d: &Point<C>) -> Result<Vec<Point<C>>, BqError> {
    if !dist2(a, d).approx_eq(&C::from_int(3)) {
        return Err(BqError::BadAttach("spindle diagonal must have length √3"));
    }
    let mid = a.add(d).scale(&C::from_ratio(1, 2));
    let off = d.sub(a).perp().scale(&(C::sqrt3() * C::from_ratio(1, 6)));
    let (b, c) = (mid.sub(&off), mid.add(&off));
    let cos = C::from_ratio(5, 6);
    let sin = C::from_int(11).sqrt()? * C::from_ratio(1, 6);
    let v = d.sub(a);
    let g = a.add(&Point::new(cos.clone() * v.x.clone() - sin.clone() * v.y.clone(), sin * v.x.clone() + cos * v.y.clone()));
    let ef = circle_intersect(a, &C::one(), &g, &C::one())?;
    let [e, f] = <[Point<C>; 2]>::try_from(ef).expect("|A − G| = √3 gives two apexes");
    Ok(vec![a.clone(), b, c, d.clone(), e, f, g])
}

/// Instantiates `kind` on `attach` (see [`default_attach`] for the shapes
/// expected).
pub fn gadget<C: Coord>(kind: GadgetKind, attach: &[Point<C>]) -> Result<Gadget<C>, BqError> {
    let [p, q] = attach else {
        return Err(BqError::BadAttach("gadgets attach to two points"));
    };
    let pts = match kind {
        GadgetKind::TriangleExtension | GadgetKind::Rhombus => {
            if !is_unit(p, q) {
                return Err(BqError::BadAttach("attachment segment must be unit"));
            }
            if kind == GadgetKind::TriangleExtension {
                vec![p.clone(), q.clone(), apex_left(p, q)]
            } else {
                vec![apex_left(p, q), p.clone(), q.clone(), apex_left(q, p)]
            }
        }
        GadgetKind::MoserSpindle => moser_spindle(p, q)?,
        GadgetKind::Chain(n) => {
            let d2 = dist2(p, q);
            if d2.is_zero_value() {
                return Err(BqError::BadAttach("chain direction is degenerate"));
            }
            let u = q.sub(p).scale(&C::one().checked_div(&d2.sqrt()?)?);
            (0..=n).map(|k| p.add(&u.scale(&C::from_int(k as i64)))).collect()
        }
    };
    let labels = match kind {
        GadgetKind::Chain(n) => (0..=n).map(|k| format!("P{k}")).collect(),
        _ => letters(pts.len()),
    };
    let n = pts.len();
    let points = PointSet::from_points(pts);
    if points.len() != n || unit_graph(&points).edges().len() != kind.edge_count() {
        return Err(BqError::BadAttach("unit edges are lost at this tolerance"));
    }
    Ok(Gadget { kind, points, labels })
}

/// Strip of lattice points in the frame `e`, `rot60(e)` at `x`: `a` hops
/// along `e` with a row of apexes above, then `b` hops along `rot60(e)`
/// with a column beside. It contains `x + a·e + b·rot60(e)`.
pub fn lattice_strip<C: Coord>(x: &Point<C>, e: &Point<C>, a: usize, b: usize) -> PointSet<C> {
    let e2 = e.rot60();
    let at = |i: usize, j: usize| x.add(&e.scale(&C::from_int(i as i64))).add(&e2.scale(&C::from_int(j as i64)));
    let mut ps = PointSet::new();
    for i in 0..=a {
        ps.insert(at(i, 0));
    }
    for i in 0..a {
        ps.insert(at(i, 1));
    }
    for j in 1..=b {
        ps.insert(at(a, j));
        if a > 0 {
            ps.insert(at(a - 1, j));
        }
    }
    ps
}

/// Adds a spindle across every pair of unit triangles of `lattice` that
/// share an edge, so the pair cannot fold onto itself. The lattice points
/// keep their indices.
pub fn brace<C: Coord>(lattice: &PointSet<C>) -> Result<PointSet<C>, BqError> {
    let g = unit_graph(lattice);
    let mut out = lattice.clone();
    for &(i, j) in g.edges() {
        let common: Vec<usize> = g.neighbors(i).iter().copied().filter(|&k| g.has_edge(j, k)).collect();
        if let [r, s] = common[..] {
            for p in moser_spindle(&lattice[r], &lattice[s])?.into_iter().skip(4) {
                out.insert(p);
            }
        }
    }
    Ok(out)
}
