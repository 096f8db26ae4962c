use std::path::PathBuf;

use genpos_core::ruled_quadric::{transversals_to_four_segments, RuledQuadricError, Segment3, TransversalSet};
use genpos_core::Tolerance;
use nalgebra::Vector3;
use rayon::prelude::*;
use serde_json::json;

use super::random_points;
use crate::docs::{arr3, read_document, to_document, vec3, LineDoc, LinesDoc, SegmentsDoc};
use crate::error::CliError;
use crate::{Context, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `segments` document with four segments.
    #[arg(long, conflicts_with_all = ["sweep", "example"])]
    input: Option<PathBuf>,
    /// Three hyperboloid rulings and a segment on the y-axis.
    #[arg(long)]
    example: bool,
    /// Count transversals of this many seeded random configurations.
    #[arg(long)]
    sweep: Option<usize>,
}

/// Rulings of `x² + y² - z² = 1` at angles `0`, `2π/3`, `4π/3` from
/// parameter `-4` to `4`, and the segment from `(0, -3, 0)` to `(0, 3, 0)`.
pub fn ruling_example() -> [Segment3<f64>; 4] {
    let ruling = |t: f64| {
        let p = Vector3::new(t.cos(), t.sin(), 0.0);
        let v = Vector3::new(-t.sin(), t.cos(), 1.0);
        Segment3::new(p - v * 4.0, p + v * 4.0).expect("nondegenerate")
    };
    let third = 2.0 * std::f64::consts::PI / 3.0;
    [
        ruling(0.0),
        ruling(third),
        ruling(2.0 * third),
        Segment3::new(Vector3::new(0.0, -3.0, 0.0), Vector3::new(0.0, 3.0, 0.0)).expect("nondegenerate"),
    ]
}

pub fn lines_document(set: &TransversalSet<f64>) -> LinesDoc {
    LinesDoc {
        lines: set
            .lines
            .iter()
            .map(|t| LineDoc {
                point: arr3(t.line.point()),
                direction: arr3(t.line.direction()),
                segment_params: Some(t.segment_params),
                max_distance: Some(t.max_distance),
            })
            .collect(),
    }
}

pub fn run(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    if let Some(trials) = args.sweep {
        return sweep(trials, ctx);
    }
    let segments: [Segment3<f64>; 4] = match (&args.input, args.example) {
        (Some(path), _) => {
            let doc: SegmentsDoc = read_document(path, "segments")?;
            let segs = doc.to_segments()?;
            segs.try_into().map_err(|v: Vec<_>| CliError::Parse(format!("need four segments, got {}", v.len())))?
        }
        (None, true) => ruling_example(),
        (None, false) => return Err(CliError::Parse("give --input, --example or --sweep".into())),
    };
    let set = transversals_to_four_segments(&segments, &ctx.tol)?;
    let lines = lines_document(&set);
    let mut table = format!("count {}\n", set.count());
    for l in &lines.lines {
        table.push_str(&format!(
            "line {} {} {} dir {} {} {}\n",
            l.point[0], l.point[1], l.point[2], l.direction[0], l.direction[1], l.direction[2]
        ));
    }
    let mut doc = to_document("lines", &lines);
    doc["count"] = json!(set.count());
    doc["tangent"] = json!(set.tangent);
    let failure = (set.count() > 2).then(|| CliError::Disagreement(format!("{} transversals", set.count())));
    Ok(Output::with_failure(doc, table, failure))
}

/// Outcome of one random trial: a count, or `None` when degenerate.
pub fn trial(seed: u64, tol: &Tolerance) -> Result<Option<usize>, RuledQuadricError> {
    let p = random_points::<8>(seed).map(|q| vec3(&q));
    let seg = |k: usize| Segment3::new(p[2 * k], p[2 * k + 1]);
    let segments = [seg(0)?, seg(1)?, seg(2)?, seg(3)?];
    match transversals_to_four_segments(&segments, tol) {
        Ok(set) => Ok(Some(set.count())),
        Err(e) if e.is_degeneracy() || matches!(e, RuledQuadricError::NotSkew(..)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn sweep(trials: usize, ctx: &Context) -> Result<Output, CliError> {
    let outcomes: Vec<Option<usize>> =
        (0..trials).into_par_iter().map(|i| trial(ctx.seed ^ i as u64, &ctx.tol)).collect::<Result<_, _>>()?;
    let mut histogram = [0usize; 4];
    let mut degenerate = 0;
    for o in &outcomes {
        match o {
            Some(c) => histogram[(*c).min(3)] += 1,
            None => degenerate += 1,
        }
    }
    let table = format!(
        "trials {trials}\ndegenerate {degenerate}\ncount 0: {}\ncount 1: {}\ncount 2: {}\ncount >2: {}\n",
        histogram[0], histogram[1], histogram[2], histogram[3]
    );
    let doc = to_document(
        "transversal_sweep",
        &json!({
            "trials": trials,
            "seed": ctx.seed,
            "degenerate": degenerate,
            "histogram": { "0": histogram[0], "1": histogram[1], "2": histogram[2], "more": histogram[3] },
        }),
    );
    let failure = (histogram[3] > 0).then(|| CliError::Disagreement(format!("{} trials with more than 2 lines", histogram[3])));
    Ok(Output::with_failure(doc, table, failure))
}
