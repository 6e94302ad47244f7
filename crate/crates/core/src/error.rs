use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("singular value iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("exponent must be finite and positive, got {0}")]
    InvalidExponent(f64),

    #[error("exponent p = {0} outside the admissible range (0, 1]")]
    ExponentAboveOne(f64),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("quadrature grid of {given} samples is below the required minimum of {required}")]
    GridTooCoarse { given: usize, required: usize },

    #[error("symbol is not analytic: lowest index {lo} < 0")]
    NotAnalytic { lo: i64 },

    #[error("coefficient at index {index} lies outside the band ({low}, {high})")]
    SupportViolation { index: i64, low: i64, high: i64 },

    #[error("witness matrix is zero")]
    ZeroWitness,

    #[error("power-law fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("power-law fit needs positive coordinates, got ({0}, {1})")]
    NonPositivePoint(f64, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
