//! Graphviz and SVG renderings. Output is a pure function of the input, with
//! coordinates printed to four decimals, so repeated runs are byte-identical.

use std::collections::BTreeSet;
use std::fmt::Write;

use rigidlab::numeric::{Coord, Point};
use rigidlab::phi::Orientation;
use rigidlab::plane::{unit_graph, PointSet};
use rigidlab::relations::{Label, RelStruct};

fn num(v: f64) -> String {
    let s = format!("{:.4}", v);
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.0000".into()
    } else {
        s
    }
}

/// An orientation as a digraph. Nodes are pinned at their plane positions;
/// both arcs of a doubled pair are drawn bold blue.
pub fn orientation_dot<C: Coord>(o: &Orientation<C>, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {name} {{").unwrap();
    writeln!(s, "  node [shape=circle, fontsize=10];").unwrap();
    for (i, p) in o.base().iter().enumerate() {
        let (x, y) = p.to_f64();
        writeln!(s, "  {i} [pos=\"{},{}!\"];", num(x), num(y)).unwrap();
    }
    for &(i, j) in o.pairs() {
        if o.pairs().contains(&(j, i)) {
            writeln!(s, "  {i} -> {j} [color=blue, penwidth=2];").unwrap();
        } else {
            writeln!(s, "  {i} -> {j};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

fn label_text(l: &Label) -> String {
    match l {
        Label::Product { point, member } => format!("({point},{member})"),
        Label::Name(n) => n.clone(),
    }
}

/// A relational structure as a digraph, labelled when the structure
/// carries labels.
pub fn relation_dot(r: &RelStruct, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {name} {{").unwrap();
    for i in 0..r.n() {
        match r.labels() {
            Some(l) => writeln!(s, "  {i} [label=\"{}\"];", label_text(&l[i]).replace('"', "\\\"")).unwrap(),
            None => writeln!(s, "  {i};").unwrap(),
        }
    }
    for &(i, j) in r.pairs() {
        writeln!(s, "  {i} -> {j};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// A point set drawn with its unit edges, optionally with an orientation's
/// arcs, highlighted points and an overlaid image of the set.
pub struct Scene<'a, C> {
    points: &'a PointSet<C>,
    arcs: Option<&'a BTreeSet<(usize, usize)>>,
    highlight: Vec<usize>,
    overlay: Option<&'a [Point<C>]>,
}

const SCALE: f64 = 60.0;
const MARGIN: f64 = 30.0;

impl<'a, C: Coord> Scene<'a, C> {
    pub fn new(points: &'a PointSet<C>) -> Self {
        Scene { points, arcs: None, highlight: Vec::new(), overlay: None }
    }

    pub fn arcs(mut self, arcs: &'a BTreeSet<(usize, usize)>) -> Self {
        self.arcs = Some(arcs);
        self
    }

    pub fn highlight(mut self, idx: &[usize]) -> Self {
        self.highlight = idx.to_vec();
        self
    }

    /// Draws `images[i]` as the image of point `i`, with the unit edges
    /// carried along in dashes.
    pub fn overlay(mut self, images: &'a [Point<C>]) -> Self {
        self.overlay = Some(images);
        self
    }

    pub fn render(&self) -> String {
        let base: Vec<(f64, f64)> = self.points.iter().map(|p| p.to_f64()).collect();
        let over: Vec<(f64, f64)> = self.overlay.map_or_else(Vec::new, |o| o.iter().map(|p| p.to_f64()).collect());
        let all = base.iter().chain(&over);
        let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (i, &(x, y)) in all.enumerate() {
            if i == 0 {
                (x0, y0, x1, y1) = (x, y, x, y);
            }
            (x0, y0, x1, y1) = (x0.min(x), y0.min(y), x1.max(x), y1.max(y));
        }
        let w = (x1 - x0) * SCALE + 2.0 * MARGIN;
        let h = (y1 - y0) * SCALE + 2.0 * MARGIN;
        // SVG's y axis points down.
        let at = |(x, y): (f64, f64)| (num((x - x0) * SCALE + MARGIN), num((y1 - y) * SCALE + MARGIN));
        let mut s = String::new();
        writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
            num(w),
            num(h),
            num(w),
            num(h)
        )
        .unwrap();
        s.push_str("  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"16\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n");
        let edges = unit_graph(self.points);
        for &(i, j) in edges.edges() {
            let (a, b) = (at(base[i]), at(base[j]));
            writeln!(s, "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\"/>", a.0, a.1, b.0, b.1).unwrap();
        }
        if let Some(arcs) = self.arcs {
            for &(i, j) in arcs {
                let doubled = arcs.contains(&(j, i));
                let colour = if doubled { "#1f4fd0" } else { "#222222" };
                let (a, b) = (at(base[i]), at(base[j]));
                writeln!(
                    s,
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{colour}\" marker-end=\"url(#arrow)\"/>",
                    a.0, a.1, b.0, b.1
                )
                .unwrap();
            }
        }
        if !over.is_empty() {
            for &(i, j) in edges.edges() {
                let (a, b) = (at(over[i]), at(over[j]));
                writeln!(
                    s,
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#d03030\" stroke-dasharray=\"4 3\"/>",
                    a.0, a.1, b.0, b.1
                )
                .unwrap();
            }
        }
        for (i, &p) in base.iter().enumerate() {
            let (cx, cy) = at(p);
            let fill = if self.highlight.contains(&i) { "#d03030" } else { "#ffffff" };
            writeln!(s, "  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"5\" fill=\"{fill}\" stroke=\"#000000\"/>").unwrap();
            writeln!(s, "  <text x=\"{cx}\" y=\"{cy}\" dx=\"7\" dy=\"-7\" font-size=\"10\">{i}</text>").unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}
