use thiserror::Error;

/// Errors raised by the computation modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("second moment of the {0} does not exist")]
    InfiniteSecondMoment(&'static str),

    #[error("net profit condition violated (margin {margin}); ruin is certain")]
    NetProfitViolated { margin: f64 },

    #[error("{0} has no exponential moments")]
    NoMgf(&'static str),

    #[error("r = {r} lies outside the convergence strip ({lower}, {upper})")]
    OutsideConvergenceStrip { r: f64, lower: f64, upper: f64 },

    #[error("no adjustment coefficient: mgf balance has no sign change on the strip")]
    NoAdjustmentCoefficient,

    #[error("{0} requires exponential premium and claim sizes")]
    UnsupportedJumpLaw(&'static str),

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("grid too small: {0}")]
    DegenerateGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
