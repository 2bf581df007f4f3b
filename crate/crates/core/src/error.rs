use thiserror::Error;

/// Errors produced by the bound, series and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tree degree must be at least 2, got {0}")]
    InvalidDegree(u32),

    #[error("lifetime parameter must lie in [0, 1], got {0}")]
    InvalidLifetime(f64),

    #[error("return probability {r} outside [0, 1/{d}]")]
    InvalidReturnProb { r: f64, d: u32 },

    #[error("invalid particle type {0}; expected 1 or 2")]
    InvalidType(u8),

    #[error("offspring parameters (a={a}, b={b}) violate a >= 1, a + b >= 2, a + b <= {max}")]
    InvalidSiteCounts { a: u32, b: u32, max: u32 },

    #[error("offspring probabilities do not form a distribution (sum {0})")]
    InvalidLaw(f64),

    #[error("no sign change on [{lo}, {hi}] (values {f_lo}, {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("derivative vanished at t = {0}")]
    ZeroDerivative(f64),

    #[error("series diverges: d*r = {0} >= 1")]
    Divergent(f64),

    #[error("tolerance {tol:e} unreachable; best bracket [{lo}, {hi}]")]
    ToleranceUnreachable { tol: f64, lo: f64, hi: f64 },

    #[error("could not reach a seeded configuration after {0} restarts")]
    SeedingExhausted(u32),

    #[error("vertex store exceeded {0} vertices")]
    VertexStoreFull(usize),

    #[error("vertex is not active in the visited set")]
    InactiveVertex,

    #[error("empirical response is not monotone in p near [{lo}, {hi}]; increase replicas or cap")]
    NonMonotone { lo: f64, hi: f64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
