use std::path::PathBuf;

use genpos_core::subspace::{affine_hull, affine_hull_of_flats, bridge_flat, jointly_skew, AffineFlat};
use nalgebra::DVector;
use serde_json::{json, Value};

use crate::docs::{read_document, to_document, FlatsDoc};
use crate::error::CliError;
use crate::{Context, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `flats` document; each flat is the affine hull of its points.
    #[arg(long)]
    input: PathBuf,
    /// With three flats, the `(2r+1)`-flat containing the first and meeting
    /// the other two in dimension `r`.
    #[arg(long)]
    bridge: bool,
}

fn flat_json(f: &AffineFlat<f64>) -> Value {
    match (f.base(), f.direction()) {
        (Some(b), Some(d)) => json!({
            "dim": f.dim(),
            "point": b.as_slice(),
            "directions": d.basis_vectors().iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>(),
        }),
        _ => json!({ "dim": -1 }),
    }
}

pub fn run(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    let doc: FlatsDoc = read_document(&args.input, "flats")?;
    if doc.flats.len() < 2 {
        return Err(CliError::Parse(format!("need at least two flats, got {}", doc.flats.len())));
    }
    let flats: Vec<AffineFlat<f64>> = doc
        .flats
        .iter()
        .map(|pts| {
            let pts: Vec<DVector<f64>> = pts.iter().map(|p| DVector::from_column_slice(p)).collect();
            affine_hull(&pts, &ctx.tol)
        })
        .collect::<Result<_, _>>()?;
    let mut pairwise = Vec::new();
    for i in 0..flats.len() {
        for j in (i + 1)..flats.len() {
            pairwise.push(json!({ "flats": [i, j], "skew": jointly_skew(&[flats[i].clone(), flats[j].clone()], &ctx.tol)? }));
        }
    }
    let joint = jointly_skew(&flats, &ctx.tol)?;
    let hull = affine_hull_of_flats(&flats, &ctx.tol)?;
    let dims: Vec<isize> = flats.iter().map(|f| f.dim()).collect();
    let mut table = format!("dims {dims:?}\nhull dim {}\njointly skew {joint}\n", hull.dim());
    for p in &pairwise {
        table.push_str(&format!("pair {} skew {}\n", p["flats"], p["skew"]));
    }
    let mut body = json!({ "dims": dims, "hull_dim": hull.dim(), "pairwise": pairwise, "jointly_skew": joint });
    if args.bridge {
        if flats.len() != 3 {
            return Err(CliError::Precondition("--bridge needs exactly three flats".into()));
        }
        let bridge = bridge_flat(&flats[0], &flats[1], &flats[2], &ctx.tol)?;
        table.push_str(&match &bridge {
            Some(b) => format!("bridge dim {}\n", b.dim()),
            None => "bridge none\n".into(),
        });
        body["bridge"] = bridge.as_ref().map_or(Value::Null, flat_json);
    }
    Ok(Output::ok(to_document("skew_report", &body), table))
}
