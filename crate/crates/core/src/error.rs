use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("pulses overlap: waiting time T = {t} fs must exceed {min} fs")]
    PulseOverlap { t: f64, min: f64 },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("unknown mode {0}")]
    UnknownMode(String),

    #[error("{component} did not converge: {fine:e} at full resolution vs {coarse:e} at half (drift {drift:.3e})")]
    NonConvergence {
        component: &'static str,
        fine: f64,
        coarse: f64,
        drift: f64,
    },

    #[error("division by zero: {0}")]
    DivisionDomain(String),

    #[error("sweep too short: covers {periods:.2} beat periods, need at least {required}")]
    SweepTooShort { periods: f64, required: f64 },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
