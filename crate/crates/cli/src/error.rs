use std::fmt;

use mixruin_core::Error;

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_UNSUPPORTED_LAW: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_OUT_OF_SCOPE: i32 = 4;

/// A failure carrying the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn out_of_scope(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_OUT_OF_SCOPE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::config(message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedJumpLaw(_) | Error::NoMgf(_) | Error::InfiniteSecondMoment(_) => {
                EXIT_UNSUPPORTED_LAW
            }
            Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
            Error::NotApplicable(_) => EXIT_OUT_OF_SCOPE,
            Error::InvalidParameter(_)
            | Error::DegenerateGrid(_)
            | Error::NetProfitViolated { .. }
            | Error::OutsideConvergenceStrip { .. }
            | Error::NoAdjustmentCoefficient => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}
