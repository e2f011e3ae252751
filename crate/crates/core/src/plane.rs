//! Finite plane point sets and their unit-distance graphs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::numeric::{circle_intersect, dist2, is_unit, Coord, FloatScalar, NumericError, Point};

/// Ordered, duplicate-free point collection. Points are addressed by index.
///
/// On the float backend two points within τ of each other are the same
/// point; the first one inserted is kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct PointSet<C> {
    points: Vec<Point<C>>,
}

impl<C: Coord> Default for PointSet<C> {
    fn default() -> Self {
        PointSet { points: Vec::new() }
    }
}

impl<C: Coord> PointSet<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points<I: IntoIterator<Item = Point<C>>>(pts: I) -> Self {
        let mut s = Self::new();
        for p in pts {
            s.insert(p);
        }
        s
    }

    /// Inserts `p` unless already present; returns its index either way.
    pub fn insert(&mut self, p: Point<C>) -> usize {
        match self.index_of(&p) {
            Some(i) => i,
            None => {
                self.points.push(p);
                self.points.len() - 1
            }
        }
    }

    pub fn index_of(&self, p: &Point<C>) -> Option<usize> {
        self.points.iter().position(|q| q.approx_eq(p))
    }

    pub fn contains(&self, p: &Point<C>) -> bool {
        self.index_of(p).is_some()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> &Point<C> {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point<C>] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point<C>> {
        self.points.iter()
    }

    /// `self` followed by the points of `other` not already present.
    pub fn union(&self, other: &PointSet<C>) -> PointSet<C> {
        let mut s = self.clone();
        for p in other.iter() {
            s.insert(p.clone());
        }
        s
    }

    /// Same points in the same order (within τ on the float backend).
    pub fn same_as(&self, other: &PointSet<C>) -> bool {
        self.len() == other.len() && self.points.iter().zip(&other.points).all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_subset_of(&self, other: &PointSet<C>) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    /// Indices in `other` of every point of `self`.
    pub fn indices_in(&self, other: &PointSet<C>) -> Option<Vec<usize>> {
        self.iter().map(|p| other.index_of(p)).collect()
    }

    pub fn subset(&self, idx: &[usize]) -> PointSet<C> {
        PointSet::from_points(idx.iter().map(|&i| self.points[i].clone()))
    }

    /// The same points on the float backend.
    pub fn to_float(&self, tau: f64) -> PointSet<FloatScalar> {
        PointSet {
            points: self
                .iter()
                .map(|p| {
                    let (x, y) = p.to_f64();
                    Point::new(FloatScalar::new(x, tau), FloatScalar::new(y, tau))
                })
                .collect(),
        }
    }

    pub fn with_tolerance(self, tau: f64) -> Self {
        PointSet { points: self.points.into_iter().map(|p| p.with_tolerance(tau)).collect() }
    }
}

impl<C: Coord> std::ops::Index<usize> for PointSet<C> {
    type Output = Point<C>;
    fn index(&self, i: usize) -> &Point<C> {
        &self.points[i]
    }
}

/// The base triangle p₀ = (0,0), p₁ = (1,0), p₂ = (1/2, √3/2).
pub fn base_triangle<C: Coord>() -> [Point<C>; 3] {
    [Point::origin(), Point::new(C::one(), C::zero()), Point::new(C::from_ratio(1, 2), C::sqrt3() * C::from_ratio(1, 2))]
}

pub fn triangle_set<C: Coord>() -> PointSet<C> {
    PointSet::from_points(base_triangle::<C>())
}

/// Indices of p₀, p₁, p₂ in `ps`.
pub fn triangle_indices<C: Coord>(ps: &PointSet<C>) -> Option<[usize; 3]> {
    let [a, b, c] = base_triangle::<C>();
    Some([ps.index_of(&a)?, ps.index_of(&b)?, ps.index_of(&c)?])
}

/// Graph distance on the triangular lattice between the origin and
/// `a·e₁ + b·e₂`, where `e₂` is `e₁` turned by 60°.
pub fn hex_distance(a: i64, b: i64) -> i64 {
    (a.abs() + b.abs() + (a + b).abs()) / 2
}

/// Lattice coordinates of the points at hex distance exactly `r`, walking
/// the ring counter-clockwise from `(r, 0)`.
fn hex_ring(r: i64) -> Vec<(i64, i64)> {
    if r == 0 {
        return vec![(0, 0)];
    }
    const DIRS: [(i64, i64); 6] = [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)];
    let mut out = Vec::with_capacity(6 * r as usize);
    let (mut a, mut b) = (r, 0);
    for (da, db) in DIRS {
        for _ in 0..r {
            out.push((a, b));
            a += da;
            b += db;
        }
    }
    out
}

/// `origin + a·e1 + b·rot60(e1)` for all `(a, b)` within hex distance
/// `radius`, shell by shell. With `e1 = (1, 0)` and the origin at p₀ this is
/// the standard triangular lattice and p₀, p₁, p₂ come first.
pub fn lattice_patch<C: Coord>(origin: &Point<C>, e1: &Point<C>, radius: u32) -> PointSet<C> {
    let e2 = e1.rot60();
    let mut ps = PointSet::new();
    for r in 0..=radius as i64 {
        for (a, b) in hex_ring(r) {
            let p = origin.add(&e1.scale(&C::from_int(a))).add(&e2.scale(&C::from_int(b)));
            ps.insert(p);
        }
    }
    ps
}

/// Triangular-lattice points within graph distance `radius` of the origin.
pub fn lattice_ball<C: Coord>(radius: u32, include_triangle: bool) -> PointSet<C> {
    let mut ps = lattice_patch(&Point::origin(), &Point::new(C::one(), C::zero()), radius);
    if include_triangle {
        for p in base_triangle::<C>() {
            ps.insert(p);
        }
    }
    ps
}

/// Lattice coordinates `(a, b)` with `v = a·(1,0) + b·(1/2, √3/2)`, if integral.
pub fn lattice_coords<C: Coord>(v: &Point<C>) -> Option<(i64, i64)> {
    let b = (v.y.clone() * C::from_int(2)).checked_div(&C::sqrt3()).ok()?.as_integer()?;
    let a = (v.x.clone() - C::from_ratio(b, 2)).as_integer()?;
    Some((a, b))
}

/// Unit-distance graph induced on a point set.
#[derive(Clone, Debug)]
pub struct UnitGraph<C> {
    pub base: PointSet<C>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl<C: Coord> UnitGraph<C> {
    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

pub fn unit_graph<C: Coord>(ps: &PointSet<C>) -> UnitGraph<C> {
    let n = ps.len();
    let mut edges = Vec::new();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if is_unit(&ps[i], &ps[j]) {
                edges.push((i, j));
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    UnitGraph { base: ps.clone(), edges, adj }
}

/// A walk `t(0), …, t(m)` with consecutive points at unit distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "C: Coord")]
pub struct UnitPath<C> {
    pub vertices: Vec<Point<C>>,
}

impl<C: Coord> UnitPath<C> {
    /// Number of unit hops.
    pub fn hops(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_valid(&self) -> bool {
        self.vertices.windows(2).all(|w| is_unit(&w[0], &w[1]))
    }
}

const HEX_STEPS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// Unit path from `from` to `to`.
///
/// When `to − from` is a triangular-lattice vector the path follows lattice
/// hops (hex-distance many). Otherwise it takes straight unit hops toward
/// `to` until the gap is at most 2, then closes with one apex (the
/// lexicographically smaller one) or the tangent midpoint.
pub fn unit_path<C: Coord>(from: &Point<C>, to: &Point<C>) -> Result<UnitPath<C>, NumericError> {
    let mut vertices = vec![from.clone()];
    if from.approx_eq(to) {
        return Ok(UnitPath { vertices });
    }
    if let Some((mut a, mut b)) = lattice_coords(&to.sub(from)) {
        let e1 = Point::new(C::one(), C::zero());
        let e2 = e1.rot60();
        let mut cur = from.clone();
        while (a, b) != (0, 0) {
            let d = hex_distance(a, b);
            let &(da, db) =
                HEX_STEPS.iter().find(|(da, db)| hex_distance(a - da, b - db) < d).expect("some lattice step reduces hex distance");
            cur = cur.add(&e1.scale(&C::from_int(da))).add(&e2.scale(&C::from_int(db)));
            a -= da;
            b -= db;
            vertices.push(cur.clone());
        }
        // Land exactly on `to` (τ drift on the float backend).
        *vertices.last_mut().expect("non-empty") = to.clone();
        return Ok(UnitPath { vertices });
    }
    let mut cur = from.clone();
    loop {
        let d2 = dist2(&cur, to);
        let four = C::from_int(4);
        match d2.cmp_value(&four) {
            std::cmp::Ordering::Greater => {
                let dir = to.sub(&cur).scale(&C::one().checked_div(&d2.sqrt()?)?);
                cur = cur.add(&dir);
                vertices.push(cur.clone());
            }
            _ => {
                if !d2.approx_eq(&C::one()) {
                    let apexes = circle_intersect(&cur, &C::one(), to, &C::one())?;
                    vertices.push(apexes[0].clone());
                }
                vertices.push(to.clone());
                return Ok(UnitPath { vertices });
            }
        }
    }
}

/// Enlarges `t` by unit paths until its unit graph is connected and
/// contains `x`. Components already connected to `x` are left alone.
pub fn augment_tilde<C: Coord>(t: &PointSet<C>, x: &Point<C>) -> Result<PointSet<C>, NumericError> {
    let mut set = t.clone();
    let xi = set.insert(x.clone());
    loop {
        let comps = unit_graph(&set).components();
        let Some(stray) = comps.iter().find(|c| !c.contains(&xi)) else {
            return Ok(set);
        };
        let path = unit_path(&set[stray[0]].clone(), x)?;
        for p in path.vertices {
            set.insert(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::QScalar;
    use proptest::prelude::*;

    type Q = QScalar;

    fn ip(x: i64, y: i64) -> Point<Q> {
        Point::new(Q::from_int(x), Q::from_int(y))
    }

    /// Independent count of lattice points within hex distance `r`.
    fn brute_lattice_count(r: i64) -> usize {
        let mut n = 0;
        for a in -r..=r {
            for b in -r..=r {
                if hex_distance(a, b) <= r {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn lattice_ball_sizes() {
        assert_eq!(lattice_ball::<Q>(0, false).len(), 1);
        assert_eq!(lattice_ball::<Q>(1, false).len(), 7);
        assert_eq!(lattice_ball::<Q>(2, false).len(), 19);
        for r in 0..5 {
            assert_eq!(lattice_ball::<Q>(r, false).len(), brute_lattice_count(r as i64));
        }
        assert_eq!(lattice_ball::<Q>(0, true).len(), 3);
        let b1 = lattice_ball::<Q>(1, false);
        assert_eq!(triangle_indices(&b1), Some([0, 1, 2]));
    }

    #[test]
    fn unit_graph_edges() {
        assert_eq!(unit_graph(&triangle_set::<Q>()).edges().len(), 3);
        assert_eq!(unit_graph(&lattice_ball::<Q>(1, false)).edges().len(), 12);
        let far = PointSet::from_points([ip(0, 0), ip(2, 0)]);
        assert!(unit_graph(&far).edges().is_empty());
    }

    #[test]
    fn unit_path_examples() {
        let [p0, p1, _] = base_triangle::<Q>();
        assert_eq!(unit_path(&p0, &p1).unwrap().vertices, vec![p0.clone(), p1.clone()]);
        assert_eq!(unit_path(&p0, &p0).unwrap().hops(), 0);
        let chain = unit_path(&ip(0, 0), &ip(3, 0)).unwrap();
        assert_eq!(chain.vertices, vec![ip(0, 0), ip(1, 0), ip(2, 0), ip(3, 0)]);
    }

    #[test]
    fn unit_path_off_lattice_uses_apex() {
        // Gap 3/2: the apex height √7/4 leaves the field.
        let to = Point::new(Q::from_ratio(3, 2), Q::zero());
        assert_eq!(unit_path(&ip(0, 0), &to), Err(NumericError::NotRepresentable));
        let f = PointSet::from_points([ip(0, 0), to]).to_float(1e-9);
        let path = unit_path(&f[0], &f[1]).unwrap();
        assert_eq!(path.hops(), 2);
        assert!(path.is_valid());
        let long = Point::new(FloatScalar::new(4.3, 1e-9), FloatScalar::new(0.4, 1e-9));
        let path = unit_path(&f[0], &long).unwrap();
        assert!(path.is_valid());
        assert!(path.vertices.last().unwrap().approx_eq(&long));
    }

    #[test]
    fn augment_examples() {
        let tri = triangle_set::<Q>();
        assert_eq!(augment_tilde(&tri, &tri[0]).unwrap(), tri);
        let two = PointSet::from_points([ip(0, 0), ip(3, 0)]);
        let aug = augment_tilde(&two, &ip(0, 0)).unwrap();
        assert_eq!(aug.len(), 4);
        assert!(aug.contains(&ip(1, 0)) && aug.contains(&ip(2, 0)));
        assert!(unit_graph(&aug).is_connected());
        let b1 = lattice_ball::<Q>(1, false);
        assert_eq!(augment_tilde(&b1, &ip(0, 0)).unwrap(), b1);
    }

    fn lattice_pt() -> impl Strategy<Value = (i64, i64)> {
        (-5i64..6, -5i64..6)
    }

    fn lp(a: i64, b: i64) -> Point<Q> {
        Point::new(Q::from_ratio(2 * a + b, 2), Q::sqrt3() * Q::from_ratio(b, 2))
    }

    proptest! {
        #[test]
        fn lattice_paths_are_exact((a, b) in lattice_pt(), (c, d) in lattice_pt()) {
            let path = unit_path(&lp(a, b), &lp(c, d)).unwrap();
            prop_assert!(path.is_valid());
            prop_assert_eq!(path.hops() as i64, hex_distance(c - a, d - b));
        }

        #[test]
        fn augment_connects_and_grows(pts in proptest::collection::vec(lattice_pt(), 1..5), x in lattice_pt()) {
            let t = PointSet::from_points(pts.iter().map(|&(a, b)| lp(a, b)));
            let xp = lp(x.0, x.1);
            let aug = augment_tilde(&t, &xp).unwrap();
            prop_assert!(t.is_subset_of(&aug));
            prop_assert!(aug.contains(&xp));
            prop_assert!(unit_graph(&aug).is_connected());
        }

        #[test]
        fn balls_nest(r in 0u32..4) {
            prop_assert!(lattice_ball::<Q>(r, false).is_subset_of(&lattice_ball::<Q>(r + 1, false)));
        }

        #[test]
        fn float_paths_valid(x in -5.0f64..5.0, y in -5.0f64..5.0) {
            let a = Point::new(FloatScalar::new(0.1, 1e-9), FloatScalar::new(-0.2, 1e-9));
            let b = Point::new(FloatScalar::new(x, 1e-9), FloatScalar::new(y, 1e-9));
            let path = unit_path(&a, &b).unwrap();
            prop_assert!(path.is_valid());
        }
    }
}
