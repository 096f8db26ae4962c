use genpos_core::grassmann::{
    stratum_dim_oracle, stratum_witness, Incidence, IncidenceMode, PlaneSpace, StratumSpec,
};
use serde::Serialize;
use serde_json::json;

use crate::docs::to_document;
use crate::error::CliError;
use crate::{Context, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    m: i64,
    #[arg(long)]
    d: i64,
    /// Flag dimension; repeat for two or three flags.
    #[arg(long, required = true)]
    n: Vec<i64>,
    /// Intersection dimension, one per flag.
    #[arg(long, required = true, allow_negative_numbers = true)]
    r: Vec<i64>,
    /// Affine planes and flats instead of linear subspaces.
    #[arg(long)]
    affine: bool,
    /// Stratum of intersection dimension at least `r`.
    #[arg(long)]
    geq: bool,
    /// Measure the local dimension at random witnesses (single linear flag).
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 5)]
    witnesses: usize,
}

#[derive(Serialize)]
struct Verification {
    witnesses: usize,
    oracle: Vec<usize>,
    agree: bool,
}

pub fn run(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    if args.n.len() != args.r.len() {
        return Err(CliError::Parse(format!("{} values of --n but {} of --r", args.n.len(), args.r.len())));
    }
    let spec = StratumSpec {
        m: args.m,
        d: args.d,
        constraints: args.n.iter().zip(&args.r).map(|(&n, &r)| Incidence { n, r }).collect(),
        mode: if args.geq { IncidenceMode::AtLeast } else { IncidenceMode::Exact },
        space: if args.affine { PlaneSpace::Affine } else { PlaneSpace::Linear },
    };
    let value = match spec.evaluate() {
        Ok(v) => v,
        Err(e) => {
            let doc = to_document("stratum_report", &json!({ "spec": spec, "feasible": false, "error": e.to_string() }));
            let table = format!("infeasible: {e}\n");
            return Ok(Output::with_failure(doc, table, Some(e.into())));
        }
    };

    let mut verification = None;
    if args.verify {
        if args.affine || spec.constraints.len() != 1 {
            return Err(CliError::Precondition("--verify supports a single linear flag".into()));
        }
        let Incidence { n, r } = spec.constraints[0];
        let mut oracle = Vec::with_capacity(args.witnesses);
        for k in 0..args.witnesses {
            let w = stratum_witness::<f64>(args.m, args.d, n, r, ctx.seed ^ k as u64)?;
            oracle.push(stratum_dim_oracle(args.m, args.d, n, r, &w, &ctx.tol)?);
        }
        let expected = value.dim.value().map(|v| v as usize);
        let agree = oracle.iter().all(|&o| Some(o) == expected);
        verification = Some(Verification { witnesses: args.witnesses, oracle, agree });
    }

    let mut table = format!("value {} ({:?})\n", value.dim, value.kind).to_lowercase();
    if let Some(v) = &verification {
        let dims: Vec<String> = v.oracle.iter().map(|d| d.to_string()).collect();
        table.push_str(&format!("oracle {}\n{}\n", dims.join(" "), if v.agree { "AGREE" } else { "DISAGREE" }));
    }
    let failure = verification
        .as_ref()
        .filter(|v| !v.agree)
        .map(|v| CliError::Disagreement(format!("oracle {:?} disagrees with formula {}", v.oracle, value.dim)));
    let doc = to_document(
        "stratum_report",
        &json!({ "spec": spec, "feasible": true, "value": value, "verification": verification }),
    );
    Ok(Output::with_failure(doc, table, failure))
}
