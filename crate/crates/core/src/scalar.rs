//! Scalar abstraction shared by every geometric routine.
//!
//! All numerical code in this crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Dimension decisions are tolerance based,
//! so each scalar type carries its own default rank thresholds.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the geometry kernels.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Default ratio to the largest singular value below which a singular
    /// value counts as zero.
    fn default_rel_rank_threshold() -> Self;

    /// Default absolute floor for the same decision.
    fn default_abs_floor() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f64 {
    fn default_rel_rank_threshold() -> Self {
        1e-9
    }
    fn default_abs_floor() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_rel_rank_threshold() -> Self {
        1e-4
    }
    fn default_abs_floor() -> Self {
        1e-6
    }
}
