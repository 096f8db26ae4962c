use std::path::PathBuf;

use genpos_core::ruled_quadric::scene::{BoundingBox, Scene};
use nalgebra::Vector3;

use super::quadric::from_document as quadric_from_document;
use crate::docs::{read_document, LinesDoc, QuadricDoc, SegmentsDoc};
use crate::error::CliError;
use crate::{Context, Output};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `quadric` document to mesh.
    #[arg(long)]
    quadric: Option<PathBuf>,
    /// `segments` documents to draw.
    #[arg(long)]
    segments: Vec<PathBuf>,
    /// `lines` documents to draw, clipped to the box.
    #[arg(long)]
    lines: Vec<PathBuf>,
    /// The box is `[-h, h]^3`.
    #[arg(long, default_value_t = 2.0)]
    half_width: f64,
    /// Grid cells per side of the surface sample.
    #[arg(long, default_value_t = 32)]
    resolution: usize,
}

pub fn run(args: &Args, _ctx: &Context) -> Result<Output, CliError> {
    if !(args.half_width > 0.0 && args.half_width.is_finite()) {
        return Err(CliError::Parse("--half-width must be positive".into()));
    }
    if args.resolution == 0 {
        return Err(CliError::Parse("--resolution must be positive".into()));
    }
    let quadric = match &args.quadric {
        Some(p) => Some(quadric_from_document(&read_document::<QuadricDoc>(p, "quadric")?)?),
        None => None,
    };
    let mut segments = Vec::new();
    for p in &args.segments {
        segments.extend(read_document::<SegmentsDoc>(p, "segments")?.to_segments()?);
    }
    let mut lines = Vec::new();
    for p in &args.lines {
        lines.extend(read_document::<LinesDoc>(p, "lines")?.to_lines()?);
    }
    let h = args.half_width;
    let scene = Scene {
        bounds: BoundingBox { lo: Vector3::repeat(-h), hi: Vector3::repeat(h) },
        quadric,
        segments,
        lines,
    };
    Ok(Output::raw(scene.to_obj(args.resolution)))
}
