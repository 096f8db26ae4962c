//! Dimensions of incidence strata in Grassmannians and in spaces of affine
//! planes, with a numerical local-dimension oracle for the single-flag case.
//!
//! `G(m, d; n, r)` is the set of `d`-dimensional subspaces of `R^m` meeting a
//! fixed `n`-dimensional subspace in exactly `r` dimensions; the `≥ r` variant
//! relaxes the equality. The affine counterparts replace subspaces by flats,
//! with intersection dimension `-1` meaning disjoint. Affine results are upper
//! bounds obtained through the homogenizing inclusion into `G(m+1, d+1; ...)`.

mod formulas;
mod oracle;

pub use formulas::{
    affine_single_flag_bound, affine_three_flag_bound, affine_two_flag_bound, feasible_single,
    single_flag_dim, single_flag_dim_geq, three_flag_dim, two_flag_dim,
};
pub use oracle::{stratum_dim_oracle, stratum_dim_oracle_with, stratum_witness, OracleSettings, StratumWitness, FD_STEP};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subspace::SubspaceError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrassmannError {
    #[error("infeasible stratum parameters (m={m}, d={d}, n={n}, r={r}): need 0 <= r <= d <= n + d - r <= m")]
    Infeasible { m: i64, d: i64, n: i64, r: i64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("negative intersection dimension r = {0}")]
    NegativeR(i64),
    #[error("witness is not in the stratum: expected intersection dimension {expected}, found {found}")]
    WitnessNotInStratum { expected: usize, found: usize },
    #[error("Jacobian rank is unstable under tolerance perturbation (ranks {ranks:?})")]
    Indeterminate { ranks: Vec<usize> },
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// Dimension of a stratum, or the marker for an empty one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumDim {
    Empty,
    Dim(u64),
}

impl StratumDim {
    pub fn value(self) -> Option<u64> {
        match self {
            StratumDim::Dim(v) => Some(v),
            StratumDim::Empty => None,
        }
    }

    pub fn is_empty(self) -> bool {
        matches!(self, StratumDim::Empty)
    }

    /// Conventional dimension with `-1` for the empty set.
    pub fn as_signed(self) -> i64 {
        match self {
            StratumDim::Dim(v) => v as i64,
            StratumDim::Empty => -1,
        }
    }

    fn from_nonnegative(v: i64) -> Self {
        debug_assert!(v >= 0);
        StratumDim::Dim(v as u64)
    }
}

impl std::fmt::Display for StratumDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StratumDim::Dim(v) => write!(f, "{v}"),
            StratumDim::Empty => f.write_str("empty"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncidenceMode {
    Exact,
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneSpace {
    Linear,
    Affine,
}

/// Whether an evaluated stratum value is an exact dimension or an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Exact,
    UpperBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    /// Dimension of the fixed flag.
    pub n: i64,
    /// Target intersection dimension.
    pub r: i64,
}

/// Ambient and plane dimensions together with the incidence targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSpec {
    pub m: i64,
    pub d: i64,
    pub constraints: Vec<Incidence>,
    pub mode: IncidenceMode,
    pub space: PlaneSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumValue {
    pub kind: ValueKind,
    pub dim: StratumDim,
}

impl StratumSpec {
    pub fn validate(&self) -> Result<(), GrassmannError> {
        let (m, d) = (self.m, self.d);
        match self.space {
            PlaneSpace::Linear if !(1 <= d && d <= m) => {
                return Err(GrassmannError::Hypothesis(format!("linear strata need 1 <= d <= m, got d={d}, m={m}")))
            }
            PlaneSpace::Affine if !(0 <= d && d <= m) => {
                return Err(GrassmannError::Hypothesis(format!("affine strata need 0 <= d <= m, got d={d}, m={m}")))
            }
            _ => {}
        }
        if self.constraints.is_empty() || self.constraints.len() > 3 {
            return Err(GrassmannError::Hypothesis(format!(
                "between one and three incidence constraints are supported, got {}",
                self.constraints.len()
            )));
        }
        let floor = match self.space {
            PlaneSpace::Linear => 0,
            PlaneSpace::Affine => -1,
        };
        for c in &self.constraints {
            if c.n < 0 || c.n > m {
                return Err(GrassmannError::Hypothesis(format!("flag dimension n={} outside 0..={m}", c.n)));
            }
            if c.r < floor {
                return Err(GrassmannError::Hypothesis(format!("intersection dimension r={} below {floor}", c.r)));
            }
        }
        Ok(())
    }

    /// Dispatches to the closed form matching the shape of the constraints.
    ///
    /// Two constraints require `d = r1 + r2` (`r1 + r2 + 1` for flats), three
    /// require a common `r` with `d = 2r` (`2r + 1` for flats).
    pub fn evaluate(&self) -> Result<StratumValue, GrassmannError> {
        self.validate()?;
        let (m, d) = (self.m, self.d);
        let c = &self.constraints;
        match (self.space, c.len()) {
            (PlaneSpace::Linear, 1) => {
                let dim = match self.mode {
                    IncidenceMode::Exact => single_flag_dim(m, d, c[0].n, c[0].r)?,
                    IncidenceMode::AtLeast => single_flag_dim_geq(m, d, c[0].n, c[0].r)?,
                };
                Ok(StratumValue { kind: ValueKind::Exact, dim })
            }
            (PlaneSpace::Linear, 2) => {
                if d != c[0].r + c[1].r {
                    return Err(GrassmannError::Hypothesis("two-flag strata need d = r1 + r2".into()));
                }
                let dim = two_flag_dim(m, c[0].n, c[0].r, c[1].n, c[1].r)?;
                Ok(StratumValue { kind: ValueKind::Exact, dim })
            }
            (PlaneSpace::Linear, _) => {
                let r = c[0].r;
                if c.iter().any(|x| x.r != r) || d != 2 * r {
                    return Err(GrassmannError::Hypothesis("three-flag strata need a common r and d = 2r".into()));
                }
                let dim = three_flag_dim(m, c[0].n, c[1].n, c[2].n, r)?;
                Ok(StratumValue { kind: ValueKind::Exact, dim })
            }
            (PlaneSpace::Affine, 1) => {
                let dim = affine_single_flag_bound(m, d, c[0].n, c[0].r)?;
                Ok(StratumValue { kind: ValueKind::UpperBound, dim })
            }
            (PlaneSpace::Affine, 2) => {
                if d != c[0].r + c[1].r + 1 {
                    return Err(GrassmannError::Hypothesis("affine two-flag strata need d = r1 + r2 + 1".into()));
                }
                let dim = affine_two_flag_bound(m, c[0].n, c[0].r, c[1].n, c[1].r)?;
                Ok(StratumValue { kind: ValueKind::UpperBound, dim })
            }
            (PlaneSpace::Affine, _) => {
                let r = c[0].r;
                if c.iter().any(|x| x.r != r) || d != 2 * r + 1 {
                    return Err(GrassmannError::Hypothesis(
                        "affine three-flag strata need a common r and d = 2r + 1".into(),
                    ));
                }
                let dim = affine_three_flag_bound(m, c[0].n, c[1].n, c[2].n, r)?;
                Ok(StratumValue { kind: ValueKind::UpperBound, dim })
            }
        }
    }
}
