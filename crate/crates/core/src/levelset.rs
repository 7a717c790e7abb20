//! The curves `Im Q̃(z) = 0` in a rectangle of the closed upper half-plane,
//! traced by marching squares on a uniform grid.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::n1::N1Function;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let b = BoundingBox {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) || !(x_min < x_max) || !(y_min < y_max) {
            return Err(Error::Precondition(format!("degenerate box {b:?}")));
        }
        if y_min < 0.0 {
            return Err(Error::domain(
                Complex64::new(x_min, y_min),
                "the box must lie in the closed upper half-plane",
            ));
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelCurveSet {
    pub bbox: BoundingBox,
    pub nx: usize,
    pub ny: usize,
    pub polylines: Vec<Vec<Complex64>>,
    /// Abscissas where polylines reach the real axis, sorted.
    pub contacts: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    /// Crossing on the horizontal edge from node (i, j) to (i+1, j).
    H(usize, usize),
    /// Crossing on the vertical edge from node (i, j) to (i, j+1).
    V(usize, usize),
    /// Crossing exactly at a grid node.
    Node(usize, usize),
}

struct Grid<'a, F> {
    f: &'a F,
    bbox: BoundingBox,
    nx: usize,
    ny: usize,
    values: Vec<Vec<f64>>,
}

impl<F: Fn(Complex64) -> Result<f64> + Sync> Grid<'_, F> {
    fn x(&self, i: usize) -> f64 {
        if i == self.nx {
            self.bbox.x_max
        } else {
            self.bbox.x_min + (self.bbox.x_max - self.bbox.x_min) * i as f64 / self.nx as f64
        }
    }

    fn y(&self, j: usize) -> f64 {
        if j == self.ny {
            self.bbox.y_max
        } else {
            self.bbox.y_min + (self.bbox.y_max - self.bbox.y_min) * j as f64 / self.ny as f64
        }
    }

    fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }

    fn v(&self, i: usize, j: usize) -> f64 {
        self.values[j][i]
    }

    /// Crossing between nodes `a` and `b` (values of opposite sign class).
    fn crossing(&self, a: (usize, usize), b: (usize, usize), edge: Key) -> (Key, Complex64) {
        let (va, vb) = (self.v(a.0, a.1), self.v(b.0, b.1));
        let t = va / (va - vb);
        if t <= 0.0 {
            return (Key::Node(a.0, a.1), self.node(a.0, a.1));
        }
        if t >= 1.0 {
            return (Key::Node(b.0, b.1), self.node(b.0, b.1));
        }
        let (pa, pb) = (self.node(a.0, a.1), self.node(b.0, b.1));
        (edge, pa + (pb - pa) * t)
    }
}

/// Marching squares for `{g = 0}` with `g = Im Q̃`.
pub fn trace_im_zero(q: &N1Function, bbox: BoundingBox, nx: usize, ny: usize) -> Result<LevelCurveSet> {
    trace_zero_set(&|z: Complex64| q.eval_extended(z).map(|v| v.im), bbox, nx, ny)
}

/// Marching squares for the zero set of a real function on the box. Nodes
/// where `g` cannot be evaluated are skipped together with their cells.
pub fn trace_zero_set<F>(g: &F, bbox: BoundingBox, nx: usize, ny: usize) -> Result<LevelCurveSet>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    if nx == 0 || ny == 0 {
        return Err(Error::Precondition("grid needs at least one cell per direction".into()));
    }
    let mut grid = Grid {
        f: g,
        bbox,
        nx,
        ny,
        values: Vec::new(),
    };
    let values: Vec<Vec<f64>> = (0..=ny)
        .into_par_iter()
        .map(|j| {
            (0..=nx)
                .map(|i| (grid.f)(grid.node(i, j)).unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    grid.values = values;

    let dy = (bbox.y_max - bbox.y_min) / ny as f64;
    let dx = (bbox.x_max - bbox.x_min) / nx as f64;
    let axis_tol = 1e-12 * (1.0 + bbox.y_max.abs());
    let on_axis = |p: Complex64| p.im.abs() <= axis_tol;

    let mut points: HashMap<Key, Complex64> = HashMap::new();
    let mut segments: Vec<(Key, Key)> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let vals: Vec<f64> = corners.iter().map(|&(a, b)| grid.v(a, b)).collect();
            if vals.iter().any(|v| v.is_nan()) {
                continue;
            }
            let pos: Vec<bool> = vals.iter().map(|&v| v > 0.0).collect();
            // Edges: bottom, right, top, left.
            let edges = [
                (corners[0], corners[1], Key::H(i, j)),
                (corners[1], corners[2], Key::V(i + 1, j)),
                (corners[3], corners[2], Key::H(i, j + 1)),
                (corners[0], corners[3], Key::V(i, j)),
            ];
            let sides = [(0, 1), (1, 2), (3, 2), (0, 3)];
            let crossing: Vec<Option<(Key, Complex64)>> = edges
                .iter()
                .zip(sides)
                .map(|(&(a, b, k), (sa, sb))| (pos[sa] != pos[sb]).then(|| grid.crossing(a, b, k)))
                .collect();
            let found: Vec<usize> = (0..4).filter(|&e| crossing[e].is_some()).collect();
            let pairs: Vec<(usize, usize)> = match found.len() {
                2 => vec![(found[0], found[1])],
                4 => {
                    let center = Complex64::new(grid.x(i) + 0.5 * dx, grid.y(j) + 0.5 * dy);
                    let vc = g(center).unwrap_or(f64::NAN);
                    if vc.is_nan() {
                        continue;
                    }
                    if (vc > 0.0) == pos[0] {
                        // Corner 0 and 2 regions join through the center.
                        vec![(0, 1), (2, 3)]
                    } else {
                        vec![(0, 3), (1, 2)]
                    }
                }
                _ => vec![],
            };
            for (a, b) in pairs {
                let (ka, pa) = crossing[a].expect("edge has a crossing");
                let (kb, pb) = crossing[b].expect("edge has a crossing");
                if ka == kb || (on_axis(pa) && on_axis(pb)) {
                    continue;
                }
                points.insert(ka, pa);
                points.insert(kb, pb);
                segments.push((ka, kb));
            }
        }
    }

    let polylines = link_segments(&segments, &points);
    let mut raw: Vec<f64> = Vec::new();
    for line in &polylines {
        for (k, p) in line.iter().enumerate() {
            let endpoint = k == 0 || k + 1 == line.len();
            if on_axis(*p) || (endpoint && p.im - bbox.y_min.min(0.0) <= dy && bbox.y_min <= dy) {
                raw.push(p.re);
            }
        }
    }
    let contacts = cluster(raw, 2.0 * dx);
    Ok(LevelCurveSet {
        bbox,
        nx,
        ny,
        polylines,
        contacts,
    })
}

fn link_segments(segments: &[(Key, Key)], points: &HashMap<Key, Complex64>) -> Vec<Vec<Complex64>> {
    let mut adjacency: HashMap<Key, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(s);
        adjacency.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();

    let walk = |start: Key, used: &mut Vec<bool>| -> Option<Vec<Complex64>> {
        let mut keys = vec![start];
        let mut current = start;
        loop {
            let next_seg = adjacency[&current].iter().copied().find(|&s| !used[s]);
            let Some(s) = next_seg else { break };
            used[s] = true;
            let (a, b) = segments[s];
            current = if a == current { b } else { a };
            keys.push(current);
        }
        (keys.len() > 1).then(|| keys.iter().map(|k| points[k]).collect())
    };

    // Open chains first, from endpoints of odd degree, in a fixed order.
    let mut starts: Vec<Key> = adjacency
        .iter()
        .filter(|(_, v)| v.len() % 2 == 1)
        .map(|(k, _)| *k)
        .collect();
    starts.sort_by_key(key_order);
    for k in starts {
        while let Some(line) = walk(k, &mut used) {
            lines.push(line);
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            if let Some(line) = walk(segments[s].0, &mut used) {
                lines.push(line);
            }
        }
    }
    lines
}

fn key_order(k: &Key) -> (usize, usize, u8) {
    match *k {
        Key::H(i, j) => (j, i, 0),
        Key::V(i, j) => (j, i, 1),
        Key::Node(i, j) => (j, i, 2),
    }
}

fn cluster(mut xs: Vec<f64>, gap: f64) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for x in xs {
        if let Some(&last) = group.last() {
            if x - last > gap {
                out.push(group.iter().sum::<f64>() / group.len() as f64);
                group.clear();
            }
        }
        group.push(x);
    }
    if !group.is_empty() {
        out.push(group.iter().sum::<f64>() / group.len() as f64);
    }
    out
}

/// Sorted abscissas where the traced curves meet the real axis.
pub fn departure_points(curves: &LevelCurveSet) -> Vec<f64> {
    curves.contacts.clone()
}

impl LevelCurveSet {
    /// `polyline,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("polyline,re,im\n");
        for (id, line) in self.polylines.iter().enumerate() {
            for p in line {
                let _ = writeln!(out, "{id},{},{}", fmt_f64(p.re), fmt_f64(p.im));
            }
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let b = self.bbox;
        let width = 800.0;
        let height = width * (b.y_max - b.y_min) / (b.x_max - b.x_min);
        let sx = |x: f64| (x - b.x_min) / (b.x_max - b.x_min) * width;
        let sy = |y: f64| height - (y - b.y_min) / (b.y_max - b.y_min) * height;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.3} {height:.3}\">"
        );
        let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        if b.y_min <= 0.0 {
            let _ = writeln!(
                out,
                "<line x1=\"0\" y1=\"{0:.3}\" x2=\"{width:.3}\" y2=\"{0:.3}\" stroke=\"gray\" stroke-width=\"1\"/>",
                sy(0.0)
            );
        }
        for line in &self.polylines {
            let pts: Vec<String> = line
                .iter()
                .map(|p| format!("{:.3},{:.3}", sx(p.re), sy(p.im)))
                .collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
                pts.join(" ")
            );
        }
        for &x in &self.contacts {
            let _ = writeln!(
                out,
                "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"red\"/>",
                sx(x),
                sy(0.0)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}
