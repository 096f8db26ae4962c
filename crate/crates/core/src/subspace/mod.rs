//! Linear and affine subspace arithmetic with singular-value rank decisions.
//!
//! Every dimension in this crate is decided by one policy: a singular value
//! `s` counts as nonzero iff `s > max(abs_floor, rel_rank_threshold * s_max)`
//! where `s_max` is the largest singular value of the matrix being ranked.
//! Sums and intersections of a pair are decided from one decomposition, so the
//! modular law `dim(U + V) + dim(U ∩ V) = dim U + dim V` holds exactly for the
//! decided integers.

mod affine;
mod bridge;
mod linear;

pub use affine::{affine_hull, affine_hull_of_flats, intersect_affine, jointly_skew, AffineFlat};
pub use bridge::{bridge_flat, bridge_subspace};
pub use linear::{intersect_linear, orthogonal_complement, span_of, sum, LinSubspace};

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("ambient dimension must be at least 1")]
    ZeroAmbient,
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("basis columns are not orthonormal")]
    NotOrthonormal,
    #[error("affine hull of an empty point set")]
    EmptyInput,
    #[error("operation requires a nonempty flat")]
    EmptyFlat,
    #[error("at least two flats are required, got {0}")]
    TooFewFlats(usize),
    #[error("{0} and {1} intersect in a nonzero subspace")]
    NontrivialIntersection(&'static str, &'static str),
    #[error("the r-dimensional subspace is not contained in V1 + V2")]
    NotInSum,
    #[error("flats {0} and {1} are not skew")]
    NotSkew(usize, usize),
    #[error("numerically degenerate configuration: {0}")]
    Degenerate(&'static str),
}

/// Rank decision policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    rel_rank_threshold: T,
    abs_floor: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(rel_rank_threshold: T, abs_floor: T) -> Result<Self, SubspaceError> {
        if !rel_rank_threshold.is_finite() || !abs_floor.is_finite() {
            return Err(SubspaceError::InvalidTolerance("thresholds must be finite"));
        }
        if rel_rank_threshold < T::zero() || abs_floor < T::zero() {
            return Err(SubspaceError::InvalidTolerance("thresholds must be nonnegative"));
        }
        if rel_rank_threshold >= T::one() {
            return Err(SubspaceError::InvalidTolerance("relative threshold must be < 1"));
        }
        Ok(Self { rel_rank_threshold, abs_floor })
    }

    pub fn rel_rank_threshold(&self) -> T {
        self.rel_rank_threshold
    }

    pub fn abs_floor(&self) -> T {
        self.abs_floor
    }

    /// Multiplies the relative threshold by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self, SubspaceError> {
        Self::new(self.rel_rank_threshold * factor, self.abs_floor)
    }

    /// Cutoff below which a singular value of a matrix with largest singular
    /// value `scale` is treated as zero.
    #[inline]
    pub fn threshold(&self, scale: T) -> T {
        let rel = self.rel_rank_threshold * scale.abs();
        if rel > self.abs_floor {
            rel
        } else {
            self.abs_floor
        }
    }

    /// Cutoff for a length measured on data of magnitude `scale`, never
    /// smaller than the cutoff at unit scale.
    #[inline]
    pub fn length_threshold(&self, scale: T) -> T {
        self.threshold(scale.abs().max(T::one()))
    }

    /// Decided rank of a list of singular values.
    pub fn rank(&self, singular_values: &[T]) -> usize {
        let smax = singular_values
            .iter()
            .fold(T::zero(), |acc, &s| if s > acc { s } else { acc });
        let cut = self.threshold(smax);
        singular_values.iter().filter(|&&s| s > cut).count()
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rel_rank_threshold: T::default_rel_rank_threshold(),
            abs_floor: T::default_abs_floor(),
        }
    }
}
