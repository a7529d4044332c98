use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A model parameter is out of range or not finite.
    InvalidConfig(String),
    /// An integrand returned a non-finite value at a quadrature node.
    NonFinite { node: f64 },
    /// Gauss–Hermite rules below this size are rejected.
    TooFewNodes { nodes: usize, min: usize },
    /// No rows at all.
    EmptyData,
    /// The cell `(A = a, M = m)` has no rows, so the g-formula is undefined.
    PositivityViolation { a: u8, m: u8 },
    /// A treatment arm needed by the estimator is empty.
    EmptyArm { a: u8 },
    /// Bounds and other binary-only procedures were given a non-binary outcome.
    NotBinaryOutcome,
    /// Probabilities or means outside `[0, 1]`, or otherwise malformed input.
    InvalidInput(String),
    /// Least-squares design without full column rank.
    RankDeficient { equation: &'static str },
    /// No unit has `M(0) = m`.
    DegenerateStratum { m: u8 },
    /// Not enough units for a diagnostic.
    TooFewUnits { needed: usize, got: usize },
    /// The Cartesian grid exceeds the configured cap.
    GridTooLarge { size: u64, cap: u64 },
    /// A Monte Carlo sweep over more settings than allowed without an override.
    MonteCarloGridNotAllowed { size: u64, cap: u64 },
    /// Error raised while evaluating one grid setting.
    Setting { index: u64, source: alloc::boxed::Box<Error> },
}

impl Error {
    /// True for failures of numerical routines (quadrature, least squares).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NonFinite { .. } | Error::RankDeficient { .. } => true,
            Error::Setting { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn in_setting(self, index: u64) -> Self {
        Error::Setting { index, source: alloc::boxed::Box::new(self) }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid model configuration: {msg}"),
            Error::NonFinite { node } => {
                write!(f, "integrand is not finite at quadrature node u = {node}")
            }
            Error::TooFewNodes { nodes, min } => {
                write!(f, "quadrature needs at least {min} nodes, got {nodes}")
            }
            Error::EmptyData => f.write_str("dataset is empty"),
            Error::PositivityViolation { a, m } => {
                write!(f, "positivity violation: no rows with A={a}, M={m}")
            }
            Error::EmptyArm { a } => write!(f, "no rows with A={a}"),
            Error::NotBinaryOutcome => f.write_str("outcome is not binary"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::RankDeficient { equation } => {
                write!(f, "design matrix for {equation} is rank deficient")
            }
            Error::DegenerateStratum { m } => write!(f, "no units with M(0)={m}"),
            Error::TooFewUnits { needed, got } => {
                write!(f, "need at least {needed} units, got {got}")
            }
            Error::GridTooLarge { size, cap } => {
                write!(f, "grid has {size} settings, above the cap of {cap}")
            }
            Error::MonteCarloGridNotAllowed { size, cap } => write!(
                f,
                "Monte Carlo over {size} settings exceeds {cap}; enable the full-MC override"
            ),
            Error::Setting { index, source } => write!(f, "setting {index}: {source}"),
        }
    }
}

impl core::error::Error for Error {}
