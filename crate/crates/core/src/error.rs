use thiserror::Error;

/// Errors raised by the leakage and exponent computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Matrix text could not be parsed. Line and column are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid channel descriptor {0:?}: expected bec:<eps> or bsc:<eps>")]
    Channel(String),

    #[error("{name} = {value} is not a probability in [0, 1]")]
    Probability { name: &'static str, value: f64 },

    #[error("index set has ambient length {got}, matrix has {expected} columns")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{what}: {value} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("requested {k} rows but only {n} columns")]
    RowsExceedColumns { k: usize, n: usize },

    /// Parameter sits on a boundary where the quantity is undefined.
    #[error("degenerate parameter: {0}")]
    Degenerate(String),

    #[error("rate {rate} outside the admissible range [0, {max}]")]
    Rate { rate: f64, max: f64 },

    #[error("empty code: matrix has no rows")]
    EmptyCode,

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("curve {kind} is not defined for channel {channel}")]
    CurveChannel { kind: String, channel: String },

    #[error("unknown {what} {name:?}")]
    Unknown { what: &'static str, name: String },

    /// A bound that must hold by construction was observed to fail.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Probability { name, value })
    }
}
