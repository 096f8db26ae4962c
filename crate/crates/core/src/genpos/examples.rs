//! Small complexes, one per certified case, with a suggested `δ`.

use std::f64::consts::PI;

use nalgebra::DVector;

use super::complex::PLMapSpec;
use super::pipeline::CaseParams;

#[derive(Debug, Clone)]
pub struct ExampleComplex {
    pub name: &'static str,
    pub spec: PLMapSpec<f64>,
    pub case: CaseParams,
    pub delta: f64,
}

/// Ruling of `x² + y² - z² = 1` through angle `θ`, scaled by `1/4`, from
/// parameter `-4` to `4`.
fn ruling(theta: f64) -> [DVector<f64>; 2] {
    let (s, c) = theta.sin_cos();
    let p = [c, s, 0.0];
    let v = [-s, c, 1.0];
    let end = |t: f64| DVector::from_fn(3, |k, _| (p[k] + t * v[k]) / 4.0);
    [end(-4.0), end(4.0)]
}

fn rulings() -> Vec<DVector<f64>> {
    [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0].iter().flat_map(|&t| ruling(t)).collect()
}

/// Three ruling segments joined by two unmarked edges into a path.
pub fn case_a() -> ExampleComplex {
    let spec = PLMapSpec::new(
        (0..6).collect(),
        (0..5).map(|k| vec![k, k + 1]).collect(),
        vec![vec![vec![0, 1]], vec![vec![2, 3]], vec![vec![4, 5]]],
        rulings(),
    )
    .expect("valid example");
    ExampleComplex { name: "a", spec, case: CaseParams::A { n: 1, m: 3 }, delta: 2.0 }
}

/// Two triangles in `R^5` whose images start in a common 3-space.
pub fn case_b() -> ExampleComplex {
    let pts = [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 1.0],
        [0.0, 1.0, 0.5],
    ];
    let images = pts.iter().map(|p| DVector::from_fn(5, |k, _| if k < 3 { p[k] } else { 0.0 })).collect();
    let spec = PLMapSpec::new(
        (0..6).collect(),
        vec![vec![0, 1, 2], vec![3, 4, 5]],
        vec![vec![vec![0, 1, 2]], vec![vec![3, 4, 5]]],
        images,
    )
    .expect("valid example");
    ExampleComplex { name: "b", spec, case: CaseParams::B { n: 2, m: 5 }, delta: 2.0 }
}

/// A triangle in `R^4`, for lines (`d = 1`).
pub fn case_c() -> ExampleComplex {
    let images = vec![
        DVector::from_column_slice(&[0.0, 0.0, 0.0, 0.0]),
        DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0]),
        DVector::from_column_slice(&[0.0, 1.0, 0.0, 0.0]),
    ];
    let spec = PLMapSpec::new(vec![0, 1, 2], vec![vec![0, 1, 2]], vec![vec![vec![0, 1, 2]]], images)
        .expect("valid example");
    ExampleComplex { name: "c", spec, case: CaseParams::C { n: 2, m: 4, d: 1 }, delta: 2.0 }
}

/// Three ruling segments and a segment on the `y`-axis crossing the surface
/// twice.
pub fn case_d() -> ExampleComplex {
    let mut images = rulings();
    images.push(DVector::from_column_slice(&[0.0, -0.75, 0.0]));
    images.push(DVector::from_column_slice(&[0.0, 0.75, 0.0]));
    let spec = PLMapSpec::new(
        (0..8).collect(),
        (0..4).map(|k| vec![2 * k, 2 * k + 1]).collect(),
        (0..4).map(|k| vec![vec![2 * k, 2 * k + 1]]).collect(),
        images,
    )
    .expect("valid example");
    ExampleComplex { name: "d", spec, case: CaseParams::D, delta: 2.0 }
}

pub fn all() -> Vec<ExampleComplex> {
    vec![case_a(), case_b(), case_c(), case_d()]
}

pub fn by_name(name: &str) -> Option<ExampleComplex> {
    all().into_iter().find(|e| e.name == name)
}
