use genpos_core::genpos::GenposError;
use genpos_core::grassmann::GrassmannError;
use genpos_core::ruled_quadric::RuledQuadricError;
use genpos_core::SubspaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Disagreement(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    RetryExhausted(String),
}

impl CliError {
    /// 0 success, 1 disagreement, 2 precondition or parse failure, 3
    /// degeneracy, 4 retry exhaustion.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Disagreement(_) => 1,
            CliError::Parse(_) | CliError::Precondition(_) | CliError::Io(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::RetryExhausted(_) => 4,
        }
    }
}

impl From<SubspaceError> for CliError {
    fn from(e: SubspaceError) -> Self {
        match e {
            SubspaceError::Degenerate(_) => CliError::Degenerate(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<GrassmannError> for CliError {
    fn from(e: GrassmannError) -> Self {
        match e {
            GrassmannError::Indeterminate { .. } => CliError::Degenerate(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<RuledQuadricError> for CliError {
    fn from(e: RuledQuadricError) -> Self {
        if e.is_degeneracy() {
            CliError::Degenerate(e.to_string())
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

impl From<GenposError> for CliError {
    fn from(e: GenposError) -> Self {
        match e {
            GenposError::RetryExhausted { .. } => CliError::RetryExhausted(e.to_string()),
            GenposError::Degenerate(_) => CliError::Degenerate(e.to_string()),
            GenposError::InconsistentCertificate(_) => CliError::Disagreement(e.to_string()),
            GenposError::Subspace(inner) => inner.into(),
            GenposError::Grassmann(inner) => inner.into(),
            GenposError::RuledQuadric(inner) => inner.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}
