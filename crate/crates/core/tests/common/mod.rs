//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A line meeting four carrier lines, found in Plücker coordinates.
#[derive(Debug, Clone, Copy)]
pub struct PluckerLine {
    pub point: Vector3<f64>,
    pub direction: Vector3<f64>,
}

/// Lines meeting the four lines `a_i + t (b_i - a_i)`.
///
/// The four incidence conditions are linear in the Plücker vector of the
/// unknown line, leaving a pencil `mu P + lambda R`; the Klein quadric
/// restricted to the pencil is a binary quadratic whose discriminant sign
/// gives the number of real solutions. Returns `None` when the pencil is
/// not two-dimensional or the discriminant vanishes to `1e-9` relative.
pub fn plucker_transversals(segments: &[[Vector3<f64>; 2]; 4]) -> Option<Vec<PluckerLine>> {
    let mut rows = DMatrix::zeros(4, 6);
    for (i, [a, b]) in segments.iter().enumerate() {
        let d = (b - a).normalize();
        let m = a.cross(&d);
        for k in 0..3 {
            rows[(i, k)] = m[k];
            rows[(i, 3 + k)] = d[k];
        }
    }
    let mut padded = DMatrix::zeros(6, 6);
    padded.view_mut((0, 0), (4, 6)).copy_from(&rows);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
    let s = |k: usize| svd.singular_values[order[k]];
    if s(3) <= 1e-9 * s(0) {
        return None;
    }
    let p: Vec<f64> = v_t.row(order[4]).iter().copied().collect();
    let r: Vec<f64> = v_t.row(order[5]).iter().copied().collect();
    let omega = |x: &[f64], y: &[f64]| (0..3).map(|k| x[k] * y[3 + k] + y[k] * x[3 + k]).sum::<f64>();
    let (pp, pr, rr) = (omega(&p, &p), omega(&p, &r) , omega(&r, &r));
    // mu^2 pp + 2 mu lambda pr + lambda^2 rr = 0
    let disc = pr * pr - pp * rr;
    if disc.abs() <= 1e-9 * (pr * pr + (pp * rr).abs()) {
        return None;
    }
    if disc < 0.0 {
        return Some(Vec::new());
    }
    let root = disc.sqrt();
    let pairs: Vec<(f64, f64)> = if pp.abs() >= rr.abs() {
        vec![((-pr + root) / pp, 1.0), ((-pr - root) / pp, 1.0)]
    } else {
        vec![(1.0, (-pr + root) / rr), (1.0, (-pr - root) / rr)]
    };
    let mut out = Vec::new();
    for (mu, la) in pairs {
        let x: Vec<f64> = (0..6).map(|k| mu * p[k] + la * r[k]).collect();
        let d = Vector3::new(x[0], x[1], x[2]);
        let m = Vector3::new(x[3], x[4], x[5]);
        if d.norm() <= 1e-12 * m.norm() {
            continue;
        }
        out.push(PluckerLine { point: d.cross(&m) / d.norm_squared(), direction: d.normalize() });
    }
    Some(out)
}

/// Whether `line` meets the closed segment `[a, b]` within `tol`.
pub fn meets_segment(line: &PluckerLine, a: &Vector3<f64>, b: &Vector3<f64>, tol: f64) -> bool {
    let len = (b - a).norm();
    let e = (b - a) / len;
    let c = line.direction.dot(&e);
    let denom = 1.0 - c * c;
    if denom <= 1e-15 {
        return false;
    }
    let w = line.point - a;
    let d1 = line.direction.dot(&w);
    let d2 = e.dot(&w);
    let t = (c * d2 - d1) / denom;
    let s = (d2 - c * d1) / denom;
    let gap = (line.point + line.direction * t - (a + e * s)).norm();
    let param = s / len;
    gap <= tol * (1.0 + a.norm().max(b.norm())) && param >= -tol && param <= 1.0 + tol
}

pub fn random_points<const N: usize>(seed: u64) -> [Vector3<f64>; N] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}
