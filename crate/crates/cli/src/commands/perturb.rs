use std::path::PathBuf;

use clap::ValueEnum;
use genpos_core::genpos::{examples, perturb_pl_map, CaseParams};
use serde_json::json;

use crate::docs::{read_document, to_document, PLMapDoc};
use crate::error::CliError;
use crate::{render, write_text, Context, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Case {
    A,
    B,
    C,
    D,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `plmap` document.
    #[arg(long, conflicts_with = "example")]
    input: Option<PathBuf>,
    /// Built-in example complex; supplies case, parameters and δ unless given.
    #[arg(long, value_enum)]
    example: Option<Case>,
    #[arg(long, value_enum)]
    case: Option<Case>,
    /// Bound on the dimension of the marked subcomplexes.
    #[arg(long)]
    n: Option<usize>,
    /// Ambient dimension.
    #[arg(long)]
    m: Option<usize>,
    /// Plane dimension (case c).
    #[arg(long)]
    d: Option<usize>,
    /// Allowed distance between the original and the perturbed map.
    #[arg(long)]
    delta: Option<f64>,
    /// Also write the perturbed `plmap` document here.
    #[arg(long)]
    spec_out: Option<PathBuf>,
    /// Also write the `certificate` document here.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Print the input `plmap` document and stop.
    #[arg(long)]
    emit_input: bool,
}

fn case_params(case: Case, args: &Args, spec_dim: usize) -> Result<CaseParams, CliError> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| CliError::Parse(format!("case needs --{name}")));
    let m = args.m.unwrap_or(spec_dim);
    Ok(match case {
        Case::A => CaseParams::A { n: need(args.n, "n")?, m },
        Case::B => CaseParams::B { n: need(args.n, "n")?, m },
        Case::C => CaseParams::C { n: need(args.n, "n")?, m, d: need(args.d, "d")? },
        Case::D => CaseParams::D,
    })
}

pub fn run(args: &Args, ctx: &Context) -> Result<Output, CliError> {
    let name = |c: Case| format!("{c:?}").to_lowercase();
    let example = args.example.map(|c| examples::by_name(&name(c)).expect("every case has an example"));
    let spec = match (&args.input, &example) {
        (Some(path), _) => read_document::<PLMapDoc>(path, "plmap")?.to_spec()?,
        (None, Some(ex)) => ex.spec.clone(),
        (None, None) => return Err(CliError::Parse("give --input or --example".into())),
    };
    if args.emit_input {
        let doc = to_document("plmap", &PLMapDoc::from_spec(&spec));
        return Ok(Output::ok(doc.clone(), render(&doc)));
    }
    let case = match (args.case, &example) {
        (Some(c), _) => case_params(c, args, spec.ambient_dim())?,
        (None, Some(ex)) => ex.case,
        (None, None) => return Err(CliError::Parse("--case is required with --input".into())),
    };
    let delta = args
        .delta
        .or(example.as_ref().map(|e| e.delta))
        .ok_or_else(|| CliError::Parse("--delta is required with --input".into()))?;

    let (perturbed, cert) = perturb_pl_map(&spec, case, delta, ctx.seed, &ctx.tol)?;
    cert.verify(&perturbed, &ctx.tol)?;
    let sound = cert.is_sound();
    let spec_doc = to_document("plmap", &PLMapDoc::from_spec(&perturbed));
    let cert_doc = to_document("certificate", &cert);
    if let Some(p) = &args.spec_out {
        write_text(Some(p), &render(&spec_doc))?;
    }
    if let Some(p) = &args.certificate {
        write_text(Some(p), &render(&cert_doc))?;
    }
    let counts = if cert.transversal_counts.is_empty() {
        String::new()
    } else {
        format!("max transversal count {}\n", cert.transversal_counts.iter().max().unwrap_or(&0))
    };
    let table = format!(
        "case {}\nbound {}\nrecomputed {}\nhull dims {:?}\nsubdivisions {}\ncombinations {}\nmax perturbation {:e}\n{counts}{}\n",
        serde_json::to_value(case).ok().and_then(|v| v["case"].as_str().map(String::from)).unwrap_or_default(),
        cert.bound,
        cert.recomputed_bound,
        cert.hull_dims,
        cert.subdivisions,
        cert.combinations.len(),
        cert.max_perturbation,
        if sound { "SOUND" } else { "UNSOUND" },
    );
    let doc = to_document("perturbation", &json!({ "sound": sound, "spec": spec_doc, "certificate": cert_doc }));
    let failure = (!sound).then(|| CliError::Disagreement("certificate is not sound".into()));
    Ok(Output::with_failure(doc, table, failure))
}
