use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index ({row}, {col}) out of range for dimension {dim} (indices are 1-based)")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid map parameters: {0}")]
    InvalidParams(String),

    #[error("{what} is only available for n = 3 (got n = {n})")]
    UnsupportedDimension { what: &'static str, n: usize },

    #[error("{0}")]
    OutOfRange(String),

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("eigenvalue count mismatch: closed form has {closed}, numeric has {numeric}")]
    CountMismatch { closed: usize, numeric: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown layer `{0}`")]
    UnknownLayer(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
