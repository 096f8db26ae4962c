//! Finite-dimensional incidence geometry: subspace arithmetic, dimensions of
//! Grassmann incidence strata, doubly ruled quadrics through skew lines, line
//! transversals to segments in `R^3`, and general-position perturbation of
//! piecewise-linear maps with checkable certificates.
//!
//! The geometry is generic over the scalar type (see [`scalar::Real`]); the
//! aliases at the crate root fix it to `f64`, which is what the default
//! tolerances are calibrated for.

pub mod scalar;
pub mod genpos;
pub mod grassmann;
pub mod ruled_quadric;
pub mod subspace;

mod linalg;

pub use scalar::Real;
pub use subspace::SubspaceError;

pub type Tolerance = subspace::Tolerance<f64>;
pub type LinSubspace = subspace::LinSubspace<f64>;
pub type AffineFlat = subspace::AffineFlat<f64>;
pub type Quadric3 = ruled_quadric::Quadric3<f64>;
pub type Line3 = ruled_quadric::Line3<f64>;
pub type Segment3 = ruled_quadric::Segment3<f64>;
pub type PLMapSpec = genpos::PLMapSpec<f64>;
pub use genpos::{CaseParams, GPCertificate};
