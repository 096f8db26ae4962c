//! JSON documents exchanged by the subcommands.
//!
//! Every document is an object with a `kind` string and an integer
//! `version`, next to the fields of its body.

use std::path::Path;

use genpos_core::genpos::PLMapSpec;
use genpos_core::ruled_quadric::{Line3, Segment3};
use nalgebra::{DVector, Vector3};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

pub const VERSION: u64 = 1;

/// Monomial order of quadric coefficients.
pub const MONOMIALS: [&str; 10] = ["x^2", "y^2", "z^2", "xy", "xz", "yz", "x", "y", "z", "1"];

pub fn to_document<B: Serialize>(kind: &str, body: &B) -> Value {
    let mut map = match serde_json::to_value(body).expect("document bodies serialize") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    map.insert("kind".into(), Value::String(kind.into()));
    map.insert("version".into(), Value::from(VERSION));
    Value::Object(map)
}

pub fn from_document<B: DeserializeOwned>(value: Value, kind: &str) -> Result<B, CliError> {
    let found = value.get("kind").and_then(Value::as_str).unwrap_or("<missing>");
    if found != kind {
        return Err(CliError::Parse(format!("expected a `{kind}` document, found `{found}`")));
    }
    match value.get("version").and_then(Value::as_u64) {
        Some(VERSION) => {}
        other => return Err(CliError::Parse(format!("unsupported document version {other:?}"))),
    }
    serde_json::from_value(value).map_err(|e| CliError::Parse(format!("malformed `{kind}` document: {e}")))
}

pub fn read_document<B: DeserializeOwned>(path: &Path, kind: &str) -> Result<B, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: invalid JSON: {e}", path.display())))?;
    from_document(value, kind)
}

pub type Point3 = [f64; 3];

pub fn vec3(p: &Point3) -> Vector3<f64> {
    Vector3::new(p[0], p[1], p[2])
}

pub fn arr3(v: &Vector3<f64>) -> Point3 {
    [v.x, v.y, v.z]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointsDoc {
    pub points: Vec<Point3>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentsDoc {
    pub segments: Vec<[Point3; 2]>,
}

impl SegmentsDoc {
    pub fn to_segments(&self) -> Result<Vec<Segment3<f64>>, CliError> {
        self.segments.iter().map(|[a, b]| Ok(Segment3::new(vec3(a), vec3(b))?)).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineDoc {
    pub point: Point3,
    pub direction: Point3,
    /// Parameters `s_i` with hits `a_i + s_i (b_i - a_i)` on the input segments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment_params: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_distance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinesDoc {
    pub lines: Vec<LineDoc>,
}

impl LinesDoc {
    pub fn to_lines(&self) -> Result<Vec<Line3<f64>>, CliError> {
        self.lines.iter().map(|l| Ok(Line3::new(vec3(&l.point), vec3(&l.direction))?)).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadricDoc {
    pub coefficients: [f64; 10],
    #[serde(default = "monomials")]
    pub monomials: Vec<String>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

fn monomials() -> Vec<String> {
    MONOMIALS.iter().map(|s| s.to_string()).collect()
}

impl QuadricDoc {
    pub fn new(coefficients: [f64; 10], extra: Map<String, Value>) -> Self {
        Self { coefficients, monomials: monomials(), extra }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PLMapDoc {
    pub vertices: Vec<u64>,
    pub simplices: Vec<Vec<u64>>,
    #[serde(default)]
    pub marked: Vec<Vec<Vec<u64>>>,
    pub images: Vec<Vec<f64>>,
}

impl PLMapDoc {
    pub fn to_spec(&self) -> Result<PLMapSpec<f64>, CliError> {
        let images = self.images.iter().map(|p| DVector::from_column_slice(p)).collect();
        Ok(PLMapSpec::new(self.vertices.clone(), self.simplices.clone(), self.marked.clone(), images)?)
    }

    pub fn from_spec(spec: &PLMapSpec<f64>) -> Self {
        Self {
            vertices: spec.vertices().to_vec(),
            simplices: spec.simplices().to_vec(),
            marked: spec.marked().to_vec(),
            images: spec.images().iter().map(|p| p.as_slice().to_vec()).collect(),
        }
    }
}

/// Flats given as affine hulls of point lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatsDoc {
    pub flats: Vec<Vec<Vec<f64>>>,
}
