use thiserror::Error;

/// Errors raised by the solvers in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The right-hand side was evaluated at or past the singular set `z = 0`.
    #[error("singular state: {0}")]
    Singular(String),

    /// The requested construction does not exist for these parameters.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// No sign change was found while bracketing a root.
    #[error("bracket failure: {0}")]
    Bracket(String),

    /// A continuation or iteration failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// An explicit time step exceeded the stability bound.
    #[error("time step {dt:e} exceeds stability bound {bound:e}")]
    Stability { dt: f64, bound: f64 },

    /// A non-finite value appeared during a computation.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// The trajectory tail could not be matched to any asymptotic regime.
    #[error("classification failure: {0}")]
    Classification(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
