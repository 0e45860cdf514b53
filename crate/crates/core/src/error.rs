use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gradient vanished (|d|^2 = {norm_sq:e}); iterate is stationary")]
    GradientVanished { norm_sq: f64 },

    #[error("division hazard: |{what}| = {magnitude:e} is below 1e-12")]
    DivisionHazard { what: &'static str, magnitude: f64 },

    #[error("evaluation failed at sample {sample}: {source}")]
    Sample {
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("model evaluation failed: {0}")]
    Model(String),

    #[error("least-squares fit failed: {0}")]
    Fit(String),

    #[error("problem carries {0} unresolved equality constraint(s)")]
    UnresolvedEqualities(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True when the error comes from bad inputs rather than numerical trouble.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::EmptyInput(_)
                | Error::InvalidParameter(_)
                | Error::UnresolvedEqualities(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
