use thiserror::Error;

/// Errors raised by the finite element, linear algebra and time stepping layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular circulant: eigenvalue {index} has modulus {modulus:e} (max {max:e})")]
    SingularCirculant {
        index: usize,
        modulus: f64,
        max: f64,
    },

    #[error("singular Schur complement at frequency {index}")]
    SingularSchur { index: usize },

    #[error("factorization failed: zero pivot at row {row}")]
    ZeroPivot { row: usize },

    #[error("split basis invariant violated: {0}")]
    SplitBasis(String),

    #[error("relaxation equation has no real root (discriminant {discriminant:e})")]
    NoRealRoot { discriminant: f64 },

    #[error("relaxation root rejected: gamma = {gamma} (time step too large?)")]
    RootRejected { gamma: f64 },
}

impl FemError {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, FemError::InvalidArgument(_))
    }
}

pub type Result<T> = std::result::Result<T, FemError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(FemError::InvalidArgument(msg.into()))
}
