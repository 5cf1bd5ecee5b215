use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A numeric argument is outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Shapes or dimensions do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// A scalar function handle failed its registration checks.
    #[error("registration error: {0}")]
    Registration(String),

    /// The convex/concave regime of a generalized entropy could not be decided.
    #[error("indeterminate regime: {0}")]
    IndeterminateRegime(String),

    /// The query has no closed-form answer in this library.
    #[error("unsupported query: {0}")]
    UnsupportedQuery(String),

    /// The family point lies in a region where no roof formula is known.
    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),

    /// A numerical solver failed to produce a usable answer.
    #[error("solver error: {message} (max violation {violation:.3e}, restarts {restarts})")]
    Solver {
        message: String,
        violation: f64,
        restarts: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}

/// Checks that `x` lies in `[lo, hi]`.
pub(crate) fn check_range(name: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x.is_finite() && x >= lo && x <= hi {
        Ok(())
    } else {
        domain(format!("{name} = {x} is outside [{lo}, {hi}]"))
    }
}
