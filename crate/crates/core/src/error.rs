use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("measurement operators are not complete (max |sum M^dag M - I| = {deviation:e})")]
    IncompleteScheme { deviation: f64 },

    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidBeta(f64),

    #[error("invalid spin value: {0}")]
    InvalidSpin(String),

    #[error("no tabulated spectrum for spin pair ({0}, {1})")]
    UnsupportedPair(String, String),

    #[error("efficiency undefined: measurement energy change {qm:e} is not above threshold")]
    EfficiencyUndefined { qm: f64 },

    #[error("unknown closed-form identifier `{0}`")]
    UnknownId(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
