use std::path::PathBuf;

use genpos_core::ruled_quadric::{
    classify_quadric, construction_residuals, quadric_through_three_skew_lines, Quadric3, QuadricKind,
};
use nalgebra::Vector3;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::random_points;
use crate::docs::{read_document, to_document, vec3, PointsDoc, QuadricDoc};
use crate::error::CliError;
use crate::{Context, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `points` document; the lines are `A1A2`, `A3A4`, `A5A6`.
    #[arg(long, conflicts_with_all = ["random", "example"])]
    input: Option<PathBuf>,
    /// Run this many seeded random 6-point trials instead.
    #[arg(long)]
    random: Option<usize>,
    /// Use three rulings of `x² + y² - z² = 1`.
    #[arg(long)]
    example: bool,
}

/// Rulings of `x² + y² - z² = 1` at angles `0`, `2π/3`, `4π/3`.
pub fn ruling_example() -> [Vector3<f64>; 6] {
    let mut pts = [Vector3::zeros(); 6];
    for k in 0..3 {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        let p = Vector3::new(t.cos(), t.sin(), 0.0);
        let v = Vector3::new(-t.sin(), t.cos(), 1.0);
        pts[2 * k] = p - v;
        pts[2 * k + 1] = p + v;
    }
    pts
}

fn kind_name(kind: QuadricKind) -> Value {
    serde_json::to_value(kind).expect("enum serializes")
}

pub fn run(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    if let Some(trials) = args.random {
        return batch(trials, ctx);
    }
    let points: [Vector3<f64>; 6] = match (&args.input, args.example) {
        (Some(path), _) => {
            let doc: PointsDoc = read_document(path, "points")?;
            let pts: Vec<Vector3<f64>> = doc.points.iter().map(vec3).collect();
            pts.try_into().map_err(|v: Vec<_>| CliError::Parse(format!("need six points, got {}", v.len())))?
        }
        (None, true) => ruling_example(),
        (None, false) => return Err(CliError::Parse("give --input, --example or --random".into())),
    };
    let q = quadric_through_three_skew_lines(&points, &ctx.tol)?;
    let (incidence, asymptotic) = construction_residuals(&q, &points);
    let kind = classify_quadric(&q, &ctx.tol);
    let mut extra = Map::new();
    extra.insert("classification".into(), kind_name(kind));
    extra.insert("residuals".into(), json!({ "incidence": incidence, "asymptotic": asymptotic }));
    let coefficients = q.coefficients();
    let table = format!(
        "coefficients {}\nclassification {}\nresiduals {incidence:e} {asymptotic:e}\n",
        coefficients.map(|c| c.to_string()).join(" "),
        kind_name(kind).as_str().unwrap_or("other"),
    );
    Ok(Output::ok(to_document("quadric", &QuadricDoc::new(coefficients, extra)), table))
}

pub fn from_document(doc: &QuadricDoc) -> Result<Quadric3<f64>, CliError> {
    Ok(Quadric3::from_coefficients(&doc.coefficients)?)
}

fn batch(trials: usize, ctx: &Context) -> Result<Output, CliError> {
    let results: Vec<Result<f64, bool>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let pts = random_points::<6>(ctx.seed ^ i as u64).map(|p| vec3(&p));
            match quadric_through_three_skew_lines(&pts, &ctx.tol) {
                Ok(q) => {
                    let (a, b) = construction_residuals(&q, &pts);
                    Ok(a.max(b))
                }
                Err(e) => Err(e.is_degeneracy()),
            }
        })
        .collect();
    let successes = results.iter().filter(|r| r.is_ok()).count();
    let degenerate = results.iter().filter(|r| matches!(r, Err(true))).count();
    let max_residual = results.iter().filter_map(|r| r.as_ref().ok()).fold(0.0f64, |a, &b| a.max(b));
    let doc = to_document(
        "quadric_batch",
        &json!({
            "trials": trials,
            "seed": ctx.seed,
            "successes": successes,
            "degenerate": degenerate,
            "rejected": trials - successes - degenerate,
            "max_residual": max_residual,
        }),
    );
    let table = format!("trials {trials}\nsuccesses {successes}\ndegenerate {degenerate}\nmax_residual {max_residual:e}\n");
    Ok(Output::ok(doc, table))
}
