use thiserror::Error;

/// Every failure the toolkit can report. Each variant carries a stable
/// machine-readable code (see [`Error::code`]) used by the CLI and in JSON.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("M_OUT_OF_RANGE: m must be a finite number > 1 (got {0})")]
    MOutOfRange(f64),
    #[error("N_OUT_OF_RANGE: N must be a finite number > 1 (got {0})")]
    NOutOfRange(f64),
    #[error("SIGMA_NEGATIVE: sigma must be a finite number >= 0 (got {0})")]
    SigmaNegative(f64),
    #[error("DIM_MISMATCH: chart {chart} expects {expected} components, got {got}")]
    DimMismatch {
        chart: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("ORDER_UNAVAILABLE: order {order} manifold approximation requires sigma = sigma_c (got sigma = {sigma})")]
    OrderUnavailable { order: u8, sigma: f64 },
    #[error("STEP_UNDERFLOW: step size collapsed at eta = {eta}")]
    StepUnderflow { eta: f64, state: Vec<f64> },
    #[error("INADMISSIBLE_START: {0}")]
    InadmissibleStart(String),
    #[error("NO_RETURN: only {found} of {requested} section returns before max_span")]
    NoReturn { found: usize, requested: usize },
    #[error("BAD_SPEC: {0}")]
    BadSpec(String),
    #[error("SAME_FATE_AT_ENDPOINTS: both endpoints classify as {0}")]
    SameFateAtEndpoints(String),
    #[error("TOO_MANY_INDETERMINATE: {indeterminate} of {probes} probes were inconclusive")]
    TooManyIndeterminate { indeterminate: usize, probes: usize },
    #[error("DEGENERATE_TRAJECTORY: {0}")]
    DegenerateTrajectory(String),
    #[error("BAD_CONSTANTS: {0}")]
    BadConstants(String),
    #[error("BLOWUP: profile diverges at xi = {0}")]
    Blowup(f64),
    #[error("TOUCHDOWN: profile vanishes with non-matching slope at xi = {0}")]
    Touchdown(f64),
    #[error("NO_PROFILE: {0}")]
    NoProfile(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::MOutOfRange(_) => "M_OUT_OF_RANGE",
            Error::NOutOfRange(_) => "N_OUT_OF_RANGE",
            Error::SigmaNegative(_) => "SIGMA_NEGATIVE",
            Error::DimMismatch { .. } => "DIM_MISMATCH",
            Error::OrderUnavailable { .. } => "ORDER_UNAVAILABLE",
            Error::StepUnderflow { .. } => "STEP_UNDERFLOW",
            Error::InadmissibleStart(_) => "INADMISSIBLE_START",
            Error::NoReturn { .. } => "NO_RETURN",
            Error::BadSpec(_) => "BAD_SPEC",
            Error::SameFateAtEndpoints(_) => "SAME_FATE_AT_ENDPOINTS",
            Error::TooManyIndeterminate { .. } => "TOO_MANY_INDETERMINATE",
            Error::DegenerateTrajectory(_) => "DEGENERATE_TRAJECTORY",
            Error::BadConstants(_) => "BAD_CONSTANTS",
            Error::Blowup(_) => "BLOWUP",
            Error::Touchdown(_) => "TOUCHDOWN",
            Error::NoProfile(_) => "NO_PROFILE",
        }
    }

    /// Input-validation errors, as opposed to numerical failures.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::MOutOfRange(_)
                | Error::NOutOfRange(_)
                | Error::SigmaNegative(_)
                | Error::DimMismatch { .. }
                | Error::OrderUnavailable { .. }
                | Error::InadmissibleStart(_)
                | Error::BadSpec(_)
                | Error::BadConstants(_)
                | Error::SameFateAtEndpoints(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
