//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by the front laws, grid builder, solver and CLI layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside its mathematical domain.
    #[error("{name} = {value} is outside [{min}, {max}]")]
    Domain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// The imbibition rate diverges at the initial instant (front at the surface).
    #[error("flow rate is singular at rho_f = 0")]
    FlowSingularity,

    /// A front law violated strict monotonicity while being sampled.
    #[error("front law is not strictly increasing near rho = {rho}")]
    InvalidFront { rho: f64 },

    /// Grid resolution below the minimum of two cells.
    #[error("grid size must be at least 2, got {0}")]
    GridSize(usize),

    /// The fixed-point iteration did not reach the tolerance within the cap.
    #[error(
        "fixed-point iteration did not converge at level {level}: \
         residual {residual:.3e} after {iters} iterations"
    )]
    NonConvergence {
        level: usize,
        residual: f64,
        iters: usize,
    },

    /// Mismatched layer/grid shapes; indicates misuse of the stepping API.
    #[error("internal consistency: {0}")]
    Internal(String),

    /// A config file line that is not `key = value` or a comment.
    #[error("line {line}: malformed entry {text:?} (expected `key = value`)")]
    ConfigParse { line: usize, text: String },

    /// A config key that is not recognised.
    #[error("unknown key {key:?} (valid keys: {valid})")]
    UnknownKey { key: String, valid: &'static str },

    /// A config value that parses but is out of range.
    #[error("invalid value for {field}: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },

    /// A plot was requested before the run artifacts were written.
    #[error("missing artifact: {}", .0.display())]
    MissingArtifact(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
