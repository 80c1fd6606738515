use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants are grouped by the exit code the command line maps them to:
/// configuration problems, numerical failures and resource limits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("term `{term}` is not expressible in the bond algebra {{X_j, Z_j Z_j+1}}")]
    NonDualizable { term: String },

    #[error("operator family could not be reduced to single-site terms: {0}")]
    ReductionFailure(String),

    #[error("incompatible parameters: {0}")]
    IncompatibleParams(String),

    #[error("initial state is ambiguous: overlaps {first:.12} and {second:.12} are degenerate")]
    Ambiguity { first: f64, second: f64 },

    #[error("state preparation failed: best overlap^2 {overlap:.4} is below threshold {threshold}")]
    Preparation { overlap: f64, threshold: f64 },

    #[error("integrator did not converge: {0}")]
    Integrator(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("numerically invalid: {0}")]
    NumericalValidity(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("bands {band} and {neighbor} touch at grid point ({i}, {j}) (gap {gap:.3e})")]
    Degeneracy {
        band: usize,
        neighbor: usize,
        i: usize,
        j: usize,
        gap: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Config(_) | Error::IncompatibleParams(_) => 2,
            Error::Resource(_) | Error::Io(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
