//! Reference implementations the library is checked against. They favour
//! obviousness over speed and share no code with the searches they check.

use rigidlab::relations::RelStruct;

/// Every map `src → dst` carrying pairs to pairs, found by trying all
/// `|dst|^|src|` functions. Image vectors come out in lexicographic order.
pub fn brute_force_homs(src: &RelStruct, dst: &RelStruct) -> Vec<Vec<usize>> {
    let (n, m) = (src.n(), dst.n());
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut f = vec![0; n];
    loop {
        if src.pairs().iter().all(|&(a, b)| dst.has_pair(f[a], f[b])) {
            out.push(f.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
        }
    }
}

pub type P = (f64, f64);

const UNIT_TOL: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-7;
const SAMPLES: usize = 3600;

/// What the naive placement finds for a point set.
#[derive(Clone, Debug, PartialEq)]
pub enum NaiveOutcome {
    /// Unit-preserving maps, one per congruence class.
    Maps(Vec<Vec<P>>),
    /// The maps form a continuum.
    Flexible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NaiveError {
    /// Points 0 and 1 must be a unit apart.
    NoStartEdge,
    Disconnected,
}

fn d2(a: P, b: P) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

fn unit_edges(points: &[P]) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (d2(points[i], points[j]) - 1.0).abs() < UNIT_TOL {
                e.push((i, j));
            }
        }
    }
    e
}

struct Problem {
    order: Vec<usize>,
    /// For the vertex at each position, its neighbours at earlier positions.
    back: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct Partial {
    pos: Vec<P>,
    choices: Vec<u8>,
    residuals: Vec<f64>,
}

impl Problem {
    fn new(points: &[P]) -> Result<Problem, NaiveError> {
        let n = points.len();
        let edges = unit_edges(points);
        let adj = |i: usize, j: usize| edges.contains(&(i.min(j), i.max(j)));
        if n < 2 || !adj(0, 1) {
            return Err(NaiveError::NoStartEdge);
        }
        let mut order = vec![0, 1];
        while order.len() < n {
            let next = (0..n)
                .filter(|v| !order.contains(v))
                .map(|v| (order.iter().filter(|&&u| adj(u, v)).count(), v))
                .filter(|&(c, _)| c > 0)
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            match next {
                Some((_, v)) => order.push(v),
                None => return Err(NaiveError::Disconnected),
            }
        }
        let back = (0..n).map(|k| (0..k).filter(|&j| adj(order[j], order[k])).collect()).collect();
        Ok(Problem { order, back })
    }

    /// Places positions `k..` by circle intersections, collecting finished
    /// states. The first vertex whose placed neighbours share one image is
    /// swept over the circle around that image; meeting a second one means
    /// a continuum (`Err`).
    fn extend(&self, k: usize, st: Partial, free_used: bool, out: &mut Vec<Partial>) -> Result<(), ()> {
        if k == self.order.len() {
            out.push(st);
            return Ok(());
        }
        let nb = &self.back[k];
        let a = nb[0];
        let Some(&b) = nb.iter().find(|&&j| d2(st.pos[j], st.pos[a]) > 1e-18) else {
            if free_used {
                return Err(());
            }
            if Self::settled(&st) {
                for pos in self.sweep(k, st.pos[a], &st)? {
                    out.push(Partial { pos, choices: Vec::new(), residuals: Vec::new() });
                }
            }
            return Ok(());
        };
        let (pa, pb) = (st.pos[a], st.pos[b]);
        let d = d2(pa, pb).sqrt();
        if d > 2.0 + 1e-12 {
            return Ok(());
        }
        let h = (1.0 - d * d / 4.0).max(0.0).sqrt();
        let mid = ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0);
        let perp = (-(pb.1 - pa.1) / d, (pb.0 - pa.0) / d);
        let sols: Vec<P> =
            if h < 1e-12 { vec![mid] } else { vec![(mid.0 + h * perp.0, mid.1 + h * perp.1), (mid.0 - h * perp.0, mid.1 - h * perp.1)] };
        for (c, p) in sols.into_iter().enumerate() {
            let mut next = st.clone();
            next.pos.push(p);
            next.choices.push(c as u8);
            for &j in nb.iter().filter(|&&j| j != a && j != b) {
                next.residuals.push(d2(p, st.pos[j]) - 1.0);
            }
            self.extend(k + 1, next, free_used, out)?;
        }
        Ok(())
    }

    fn settled(st: &Partial) -> bool {
        st.residuals.iter().all(|r| r.abs() < ROOT_TOL)
    }

    fn solve(&self, start: Partial) -> Result<Vec<Vec<P>>, ()> {
        let mut out = Vec::new();
        self.extend(2, start, false, &mut out)?;
        Ok(out.into_iter().filter(Self::settled).map(|s| s.pos).collect())
    }

    /// Branches after the free vertex for the angle `t`, carrying only the
    /// residuals that depend on it.
    fn at_angle(&self, at: usize, centre: P, state: &Partial, t: f64) -> Result<Vec<Partial>, ()> {
        let st = Partial {
            pos: state.pos.iter().copied().chain([(centre.0 + t.cos(), centre.1 + t.sin())]).collect(),
            choices: Vec::new(),
            residuals: Vec::new(),
        };
        let mut out = Vec::new();
        self.extend(at + 1, st, true, &mut out)?;
        Ok(out)
    }

    fn sweep(&self, at: usize, centre: P, state: &Partial) -> Result<Vec<Vec<P>>, ()> {
        let tau = std::f64::consts::TAU;
        let grid: Vec<f64> = (0..=SAMPLES).map(|i| tau * i as f64 / SAMPLES as f64).collect();
        let samples: Vec<Vec<Partial>> = grid.iter().map(|&t| self.at_angle(at, centre, state, t)).collect::<Result<_, _>>()?;
        let mut sigs: Vec<Vec<u8>> = Vec::new();
        for p in samples.iter().flatten() {
            if !sigs.contains(&p.choices) {
                sigs.push(p.choices.clone());
            }
        }
        let mut roots = Vec::new();
        for sig in sigs {
            let find = |v: &[Partial]| v.iter().find(|p| p.choices == sig).cloned();
            let series: Vec<Option<Partial>> = samples.iter().map(|s| find(s)).collect();
            let n_res = series.iter().flatten().next().map_or(0, |p| p.residuals.len());
            // The first residual that moves with the angle drives the
            // bisection; the rest are checked at the root. None moving means
            // every angle works.
            let Some(r) = (0..n_res).find(|&r| series.iter().flatten().any(|p| p.residuals[r].abs() > 1e-6)) else {
                return Err(());
            };
            for w in 0..SAMPLES {
                let (Some(left), Some(right)) = (&series[w], &series[w + 1]) else { continue };
                let (fa, fb) = (left.residuals[r], right.residuals[r]);
                let t = if fa.abs() < 1e-15 {
                    grid[w]
                } else if fa.signum() != fb.signum() {
                    let (mut lo, mut hi) = (grid[w], grid[w + 1]);
                    let mut lost = false;
                    for _ in 0..80 {
                        let mid = (lo + hi) / 2.0;
                        let Some(m) = find(&self.at_angle(at, centre, state, mid)?) else {
                            lost = true;
                            break;
                        };
                        if m.residuals[r].signum() == fa.signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    if lost {
                        continue;
                    }
                    (lo + hi) / 2.0
                } else {
                    continue;
                };
                if let Some(m) = find(&self.at_angle(at, centre, state, t)?) {
                    if Self::settled(&m) {
                        roots.push(m.pos);
                    }
                }
            }
        }
        Ok(roots)
    }
}

/// Unit-distance-preserving maps of `points` by recursive placement over
/// circle intersections, with one sampled-and-bisected angle for the first
/// vertex that has a single placed neighbour. A second such vertex, or an
/// angle no constraint depends on, reports [`NaiveOutcome::Flexible`].
pub fn naive_unit_maps(points: &[P]) -> Result<NaiveOutcome, NaiveError> {
    let prob = Problem::new(points)?;
    let p0 = (0.25, -0.5);
    let p1 = (p0.0 + 0.7f64.cos(), p0.1 + 0.7f64.sin());
    let start = Partial { pos: vec![p0, p1], choices: Vec::new(), residuals: Vec::new() };
    let Ok(found) = prob.solve(start) else {
        return Ok(NaiveOutcome::Flexible);
    };
    let mut classes: Vec<Vec<P>> = Vec::new();
    for m in found {
        // Back to input order.
        let mut img = vec![(0.0, 0.0); points.len()];
        for (k, &v) in prob.order.iter().enumerate() {
            img[v] = m[k];
        }
        if !classes.iter().any(|c| congruent(c, &img, 1e-6)) {
            classes.push(img);
        }
    }
    Ok(NaiveOutcome::Maps(classes))
}

/// Root-mean-square residual of the best isometry (reflections allowed)
/// carrying `a` onto `b`.
pub fn best_fit_rms(a: &[P], b: &[P]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let centre = |v: &[P]| {
        let (sx, sy) = v.iter().fold((0.0, 0.0), |s, p| (s.0 + p.0, s.1 + p.1));
        v.iter().map(|p| (p.0 - sx / n, p.1 - sy / n)).collect::<Vec<P>>()
    };
    let (ca, cb) = (centre(a), centre(b));
    let fit = |src: &[P]| {
        let (mut dot, mut crs) = (0.0, 0.0);
        for (p, q) in src.iter().zip(&cb) {
            dot += p.0 * q.0 + p.1 * q.1;
            crs += p.0 * q.1 - p.1 * q.0;
        }
        let t = crs.atan2(dot);
        let (c, s) = (t.cos(), t.sin());
        let ss: f64 = src.iter().zip(&cb).map(|(p, q)| d2((c * p.0 - s * p.1, s * p.0 + c * p.1), *q)).sum();
        (ss / n).sqrt()
    };
    let mirrored: Vec<P> = ca.iter().map(|p| (p.0, -p.1)).collect();
    fit(&ca).min(fit(&mirrored))
}

pub fn congruent(a: &[P], b: &[P], tol: f64) -> bool {
    best_fit_rms(a, b) < tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_counts() {
        let c3 = RelStruct::directed_cycle(3);
        assert_eq!(brute_force_homs(&c3, &c3).len(), 3);
        assert_eq!(brute_force_homs(&RelStruct::empty(2), &RelStruct::empty(3)).len(), 9);
        assert_eq!(brute_force_homs(&RelStruct::empty(0), &RelStruct::empty(0)), vec![Vec::<usize>::new()]);
        assert!(brute_force_homs(&RelStruct::empty(1), &RelStruct::empty(0)).is_empty());
    }

    fn rhombus() -> Vec<P> {
        let h = 0.75f64.sqrt();
        vec![(0.0, 0.0), (1.0, 0.0), (0.5, h), (1.5, h)]
    }

    #[test]
    fn rhombus_has_two_classes() {
        let NaiveOutcome::Maps(m) = naive_unit_maps(&rhombus()).unwrap() else { panic!() };
        assert_eq!(m.len(), 2);
    }

    fn floats<C: rigidlab::numeric::Coord>(ps: &rigidlab::plane::PointSet<C>) -> Vec<P> {
        ps.iter().map(|p| p.to_f64()).collect()
    }

    #[test]
    fn spindle_and_ball() {
        use rigidlab::bq::{default_attach, gadget, GadgetKind};
        use rigidlab::numeric::Biquad;
        let k = GadgetKind::MoserSpindle;
        let g = gadget::<Biquad>(k, &default_attach(k)).unwrap();
        let NaiveOutcome::Maps(m) = naive_unit_maps(&floats(&g.points)).unwrap() else { panic!() };
        assert_eq!(m.len(), 4);
        let b = rigidlab::plane::lattice_ball::<Biquad>(1, true);
        let NaiveOutcome::Maps(m) = naive_unit_maps(&floats(&b)).unwrap() else { panic!() };
        assert_eq!(m.len(), 11);
    }

    #[test]
    fn chain_is_flexible() {
        let pts = vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)];
        assert_eq!(naive_unit_maps(&pts).unwrap(), NaiveOutcome::Flexible);
    }

    #[test]
    fn fit_ignores_isometries() {
        let a = rhombus();
        let b: Vec<P> = a.iter().map(|p| (3.0 - p.1, 1.0 - p.0)).collect();
        assert!(best_fit_rms(&a, &b) < 1e-12);
        assert!(best_fit_rms(&a, &[(0.0, 0.0), (1.0, 0.0), (0.5, 0.9), (1.5, 0.9)]) > 1e-3);
    }
}
