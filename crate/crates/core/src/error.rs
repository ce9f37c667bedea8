use thiserror::Error;

/// Errors raised across the interval calculus.
///
/// Non-differentiability is never an error: it is reported as a verdict.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inverted endpoints: lo = {lo} > hi = {hi}")]
    InvertedEndpoints { lo: f64, hi: f64 },

    #[error("non-finite endpoint: [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },

    #[error("range overflow")]
    RangeOverflow,

    #[error("t = {t} is outside the domain {domain}")]
    OutsideDomain { t: f64, domain: String },

    #[error("endpoint inversion at t = {t}: f_lo = {lo} > f_hi = {hi}")]
    EndpointInversion { t: f64, lo: f64, hi: f64 },

    #[error("empty domain intersection")]
    EmptyDomain,

    #[error("no limit at t = {t0}")]
    NoLimit { t0: f64 },

    #[error("derivative estimate diverged at t = {t0}")]
    DerivativeDiverged { t0: f64 },

    #[error("did not converge after {doublings} doublings (last distance {err:e})")]
    DidNotConverge { doublings: u32, err: f64 },

    #[error("not H1 on range: {0}")]
    NotH1OnRange(String),

    #[error("not H2 on range: {0}")]
    NotH2OnRange(String),

    #[error("unknown corpus entry: {0}")]
    UnknownCorpusEntry(String),

    #[error("prerequisite not differentiable: {0}")]
    PrerequisiteNotDifferentiable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
