use thiserror::Error;

/// Everything that can go wrong while building, solving or checking a radial problem.
///
/// Each variant maps to a stable machine-readable code (see [`Error::code`]) used by
/// the command-line tool and the sweep files.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 3, got {0}")]
    InvalidDimension(u32),
    #[error("exponent (n-2)/(2n-8) is undefined for n = {0}")]
    UndefinedExponent(u32),
    #[error("lambda must be positive, got {0}")]
    NonpositiveLambda(f64),
    #[error("lambda = {lambda} is outside (0, lambda_1 = {lambda1})")]
    InvalidLambda { lambda: f64, lambda1: f64 },
    #[error("dimensional constants need n >= 5, got {0}")]
    UndefinedConstants(u32),
    #[error("improper integral does not converge (tail decays like s^{exponent:.3})")]
    NonconvergentIntegral { exponent: f64 },
    #[error("quadrature did not reach tolerance: estimate {estimate}, error {error}")]
    QuadratureFailed { estimate: f64, error: f64 },
    #[error("the radial equation is singular at r = 0; start from the series expansion")]
    SingularPoint,
    #[error("series start radius {r0} is too coarse (limit {limit})")]
    StartStepTooCoarse { r0: f64, limit: f64 },
    #[error("integration failed at r = {radius}")]
    IntegrationFailed { radius: f64 },
    #[error("blow-up detected at r = {radius}")]
    BlowUpDetected { radius: f64 },
    #[error("amplitude must be nonzero")]
    DegenerateAmplitude,
    #[error("no amplitude in [{a_min:e}, {a_max:e}] produces {k} nodal regions")]
    NoBracketFound { k: usize, a_min: f64, a_max: f64 },
    #[error("bisection did not converge after {iterations} iterations")]
    NonconvergentBisection { iterations: usize },
    #[error("profile has {found} interior zeros, expected exactly one")]
    MissingInteriorZero { found: usize },
    #[error("no interior minimum between the node and the boundary")]
    MissingMinimum,
    #[error("profile does not reach r = 1 (ends at {r_end})")]
    IncompleteProfile { r_end: f64 },
    #[error("solution rejected: {0}")]
    RejectedSolution(String),
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("empty window or domain")]
    EmptyDomain,
    #[error("region A_delta is empty (delta^(-1/n) s = {inner} >= 1)")]
    RegionEmpty { inner: f64 },
    #[error("residual undefined for the zero function")]
    UndefinedResidual,
    #[error("need at least {needed} records, got {got}")]
    InsufficientRecords { needed: usize, got: usize },
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable kebab-case code for files and exit reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::UndefinedExponent(_) => "undefined-exponent",
            Error::NonpositiveLambda(_) => "nonpositive-lambda",
            Error::InvalidLambda { .. } => "invalid-lambda",
            Error::UndefinedConstants(_) => "undefined-constants",
            Error::NonconvergentIntegral { .. } => "nonconvergent-integral",
            Error::QuadratureFailed { .. } => "quadrature-failed",
            Error::SingularPoint => "singular-point",
            Error::StartStepTooCoarse { .. } => "start-step-too-coarse",
            Error::IntegrationFailed { .. } => "integration-failed",
            Error::BlowUpDetected { .. } => "blow-up-detected",
            Error::DegenerateAmplitude => "degenerate-amplitude",
            Error::NoBracketFound { .. } => "no-bracket-found",
            Error::NonconvergentBisection { .. } => "nonconvergent-bisection",
            Error::MissingInteriorZero { .. } => "missing-interior-zero",
            Error::MissingMinimum => "missing-minimum",
            Error::IncompleteProfile { .. } => "incomplete-profile",
            Error::RejectedSolution(_) => "rejected-solution",
            Error::OutOfDomain(_) => "out-of-domain",
            Error::EmptyDomain => "empty-window",
            Error::RegionEmpty { .. } => "region-empty",
            Error::UndefinedResidual => "undefined-residual",
            Error::InsufficientRecords { .. } => "insufficient-records",
            Error::Config(_) => "config-parse-error",
            Error::Io(_) => "io-error",
        }
    }
}

impl Error {
    /// Process exit status: 2 for bad input, 3 for solver failures, 4 for
    /// verification failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidDimension(_)
            | Error::UndefinedExponent(_)
            | Error::NonpositiveLambda(_)
            | Error::InvalidLambda { .. }
            | Error::UndefinedConstants(_)
            | Error::OutOfDomain(_)
            | Error::Config(_)
            | Error::Io(_) => 2,
            Error::InsufficientRecords { .. } => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
