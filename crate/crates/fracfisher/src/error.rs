use thiserror::Error;

/// Everything that can go wrong in the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("profiles live on different grids")]
    GridMismatch,

    #[error("`{name}` out of range: {constraint}")]
    Parameter { name: &'static str, constraint: String },

    #[error("spectrum is not conjugate-symmetric (defect {defect:.3e}, tolerance {tolerance:.1e})")]
    Asymmetric { defect: f64, tolerance: f64 },

    #[error("mass deficit {deficit:.3e} exceeds tolerance {tolerance:.1e}; widen the grid")]
    MassDeficit { deficit: f64, tolerance: f64 },

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("support {{f > {threshold:.3e}}} is empty")]
    EmptySupport { threshold: f64 },

    #[error("non-finite value {what} near x = {x}")]
    NonFinite { what: &'static str, x: f64 },

    #[error("no tail envelope: {0}")]
    Envelope(String),

    #[error("malformed profile file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, ok: bool, constraint: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            constraint: constraint(),
        })
    }
}
