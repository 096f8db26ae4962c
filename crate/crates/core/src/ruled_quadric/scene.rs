//! Wavefront OBJ export of a quadric patch, segments and lines.

use std::fmt::Write as _;

use nalgebra::Vector3;

use super::{Line3, Quadric3, Segment3};
use crate::scalar::Real;

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox<T: Real> {
    pub lo: Vector3<T>,
    pub hi: Vector3<T>,
}

impl<T: Real> BoundingBox<T> {
    pub fn cube(half_width: T) -> Self {
        Self { lo: Vector3::repeat(-half_width), hi: Vector3::repeat(half_width) }
    }

    pub fn contains(&self, p: &Vector3<T>) -> bool {
        (0..3).all(|k| p[k] >= self.lo[k] && p[k] <= self.hi[k])
    }

    /// Parameter interval of `line` inside the box.
    pub fn clip(&self, line: &Line3<T>) -> Option<(T, T)> {
        let (mut t0, mut t1) = (T::lit(f64::NEG_INFINITY), T::lit(f64::INFINITY));
        for k in 0..3 {
            let (p, d) = (line.point()[k], line.direction()[k]);
            if d == T::zero() {
                if p < self.lo[k] || p > self.hi[k] {
                    return None;
                }
                continue;
            }
            let (a, b) = ((self.lo[k] - p) / d, (self.hi[k] - p) / d);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t0 <= t1).then_some((t0, t1))
    }
}

/// Geometry collected for export.
#[derive(Debug, Clone)]
pub struct Scene<T: Real> {
    pub bounds: BoundingBox<T>,
    pub quadric: Option<Quadric3<T>>,
    pub segments: Vec<Segment3<T>>,
    pub lines: Vec<Line3<T>>,
}

/// Triangle mesh with 0-based vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T: Real> {
    pub vertices: Vec<Vector3<T>>,
    pub triangles: Vec<[usize; 3]>,
}

/// Samples the part of `q` inside `bounds` as a height field over a
/// `resolution x resolution` grid.
///
/// The surface is solved for the coordinate whose square has the largest
/// coefficient (or, when no square appears, the largest linear coefficient),
/// giving up to two sheets; a grid cell is triangulated on a sheet when all
/// four corners have a root on it inside the box.
pub fn quadric_mesh<T: Real>(q: &Quadric3<T>, bounds: &BoundingBox<T>, resolution: usize) -> Mesh<T> {
    let res = resolution.max(1);
    let m = q.matrix();
    let axis = solve_axis(q);
    let (u, v) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let step = |k: usize, i: usize| {
        bounds.lo[k] + (bounds.hi[k] - bounds.lo[k]) * T::from_usize_lossy(i) / T::from_usize_lossy(res)
    };

    let mut mesh = Mesh { vertices: Vec::new(), triangles: Vec::new() };
    let n = res + 1;
    let mut ids = vec![[None::<usize>; 2]; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut p = Vector3::zeros();
            p[u] = step(u, i);
            p[v] = step(v, j);
            // Q(p + x e_axis) = a x² + b x + c
            p[axis] = T::zero();
            let a = m[(axis, axis)];
            let b = q.half_gradient(&p)[axis] * T::lit(2.0);
            let c = q.eval(&p);
            for (sheet, x) in sheet_roots(a, b, c).into_iter().enumerate() {
                let Some(x) = x else { continue };
                let mut w = p;
                w[axis] = x;
                if bounds.contains(&w) {
                    ids[i * n + j][sheet] = Some(mesh.vertices.len());
                    mesh.vertices.push(w);
                }
            }
        }
    }
    for i in 0..res {
        for j in 0..res {
            for sheet in 0..2 {
                let corner = |di: usize, dj: usize| ids[(i + di) * n + (j + dj)][sheet];
                if let (Some(a), Some(b), Some(c), Some(d)) = (corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)) {
                    mesh.triangles.push([a, b, c]);
                    mesh.triangles.push([a, c, d]);
                }
            }
        }
    }
    mesh
}

fn solve_axis<T: Real>(q: &Quadric3<T>) -> usize {
    let m = q.matrix();
    let best = |f: &dyn Fn(usize) -> T| (0..3).fold(0, |acc, k| if f(k).abs() > f(acc).abs() { k } else { acc });
    let k = best(&|k| m[(k, k)]);
    if m[(k, k)].abs() > T::lit(1e-12) {
        k
    } else {
        best(&|k| m[(k, 3)])
    }
}

/// Lower and upper real roots of `a x² + b x + c`; a linear equation fills
/// only the first slot.
fn sheet_roots<T: Real>(a: T, b: T, c: T) -> [Option<T>; 2] {
    if a.abs() <= T::lit(1e-12) {
        return [(b != T::zero()).then(|| -c / b), None];
    }
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        return [None, None];
    }
    let sign = if b < T::zero() { -T::one() } else { T::one() };
    let half = -(b + sign * disc.sqrt()) * T::lit(0.5);
    let r1 = half / a;
    let r2 = if half == T::zero() { r1 } else { c / half };
    [Some(r1.min(r2)), Some(r1.max(r2))]
}

impl<T: Real> Scene<T> {
    /// OBJ text with objects `surface`, `segments` and `lines`; lines are
    /// clipped to the bounding box.
    pub fn to_obj(&self, resolution: usize) -> String {
        let mut out = String::from("# genpos scene\n");
        let mut next = 1usize;
        let fmt = |p: &Vector3<T>| format!("v {} {} {}\n", p.x.as_f64(), p.y.as_f64(), p.z.as_f64());
        if let Some(q) = &self.quadric {
            let mesh = quadric_mesh(q, &self.bounds, resolution);
            out.push_str("o surface\n");
            for p in &mesh.vertices {
                out.push_str(&fmt(p));
            }
            for t in &mesh.triangles {
                let _ = writeln!(out, "f {} {} {}", t[0] + next, t[1] + next, t[2] + next);
            }
            next += mesh.vertices.len();
        }
        if !self.segments.is_empty() {
            out.push_str("o segments\n");
            for s in &self.segments {
                out.push_str(&fmt(s.a()));
                out.push_str(&fmt(s.b()));
                let _ = writeln!(out, "l {} {}", next, next + 1);
                next += 2;
            }
        }
        let clipped: Vec<_> =
            self.lines.iter().filter_map(|l| self.bounds.clip(l).map(|(t0, t1)| (l.at(t0), l.at(t1)))).collect();
        if !clipped.is_empty() {
            out.push_str("o lines\n");
            for (a, b) in &clipped {
                out.push_str(&fmt(a));
                out.push_str(&fmt(b));
                let _ = writeln!(out, "l {} {}", next, next + 1);
                next += 2;
            }
        }
        out
    }
}
