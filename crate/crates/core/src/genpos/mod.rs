//! General-position perturbation of piecewise-linear maps.
//!
//! A finite complex with a map into `R^m` is subdivided until its simplex
//! images are small, then every vertex image is moved by a small random
//! amount until the rank predicates needed by the dimension bounds hold. The
//! resulting [`GPCertificate`] records those predicates and can be rechecked.

mod complex;
pub mod examples;
mod pipeline;
mod predicates;

use thiserror::Error;

use crate::grassmann::GrassmannError;
use crate::ruled_quadric::RuledQuadricError;
use crate::subspace::SubspaceError;

pub use complex::{
    barycentric_subdivide, subdivide_until, PLMapSpec, Simplex, VertexId, DIAMETER_MARGIN, SIMPLEX_CAP, SUBDIVISION_CAP,
};
pub use pipeline::{bset_dim_bound, perturb_pl_map, CaseParams, CombinationReport, GPCertificate, SkewReport};
pub use predicates::{
    check_condition_6, check_condition_7, general_position, generic_perturb, Perturbation, Predicate, RETRY_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenposError {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("outside the certified regime: {0}")]
    OutsideCertifiedRegime(String),
    #[error("subdivision did not reach the diameter bound after {rounds} rounds")]
    SubdivisionCap { rounds: usize },
    #[error("no admissible perturbation within {attempts} draws")]
    RetryExhausted { attempts: usize },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("inconsistent certificate: {0}")]
    InconsistentCertificate(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    RuledQuadric(#[from] RuledQuadricError),
}
