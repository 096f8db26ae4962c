//! Doubly ruled quadrics through three skew lines of `R^3`, their rulings,
//! and the lines meeting four segments.

mod lines;
mod quadric;
pub mod scene;
mod transversal;

pub use lines::{
    line_quadric_intersection, rulings_through_point, same_family, Line3, LineIntersection, LinePoint, Segment3,
};
pub use quadric::{
    classify_quadric, construction_residuals, quadric_through_three_skew_lines, Quadric3, QuadricKind,
    COEFFICIENT_COUNT,
};
pub use transversal::{transversals_to_four_segments, Transversal, TransversalSet};

use thiserror::Error;

use crate::subspace::SubspaceError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuledQuadricError {
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error("lines {0} and {1} are not skew")]
    NotSkew(usize, usize),
    #[error("degenerate configuration: the coefficient system has nullspace dimension {nullity}, expected 1")]
    Degenerate { nullity: usize },
    #[error("point is not on the surface (residual {residual:e})")]
    NotOnSurface { residual: f64 },
    #[error("line does not lie on the surface")]
    LineNotOnSurface,
    #[error("no two distinct real rulings through the point")]
    DegeneratePoint,
    #[error("the fourth carrier lies on the quadric: infinitely many transversals")]
    InfiniteFamily,
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

impl RuledQuadricError {
    /// Whether the error reflects a degenerate configuration rather than
    /// malformed input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            RuledQuadricError::Degenerate { .. } | RuledQuadricError::DegeneratePoint | RuledQuadricError::InfiniteFamily
        )
    }
}
