use thiserror::Error;

/// Errors produced by parsing, evaluation and the numerical routines.
#[derive(Error, Debug)]
pub enum Error {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain violation in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("function is not completely monotone: sign violation at derivative order {order}, lambda = {lambda}")]
    NotCompletelyMonotone { order: usize, lambda: f64 },

    #[error("function is not a Bernstein function: {msg}")]
    NotBernstein { msg: String },

    #[error("limit sequence for derivative order {order} neither stabilized nor diverged cleanly")]
    IndeterminateLimit { order: usize },

    #[error("jet order exceeded: needed {needed}, configured maximum {max}")]
    JetOrderExceeded { needed: usize, max: usize },

    #[error("precision insufficient: intermediate terms lose all significand ({msg})")]
    PrecisionLoss { msg: String },

    #[error("evaluation outside extension domain: lambda = {lambda} <= omega0 = {omega0}")]
    OutsideDomain { lambda: f64, omega0: f64 },

    #[error("quadrature failed to converge: {msg}")]
    QuadratureFailure { msg: String },

    #[error("tail-ratio fit failed: {msg}")]
    A3Fit { msg: String },

    #[error("hypothesis `{which}` failed at witness {witness:?}")]
    HypothesisFailed { which: &'static str, witness: (f64, f64) },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
