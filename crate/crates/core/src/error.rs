use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge within {iterations} iterations")]
    Convergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("invalid order pair (l = {l}, L = {big_l}): {reason}")]
    InvalidPair {
        l: f64,
        big_l: f64,
        reason: &'static str,
    },

    /// The Wronskian vanishes (to working precision) at `x`, so the kernel and
    /// potential blow up there.
    #[error("kernel singular at x = {x}: |W| = {wronskian:e}")]
    Singular { x: f64, wronskian: f64 },

    #[error("branch n = {n} gives L = {big_l} <= -1/2")]
    InadmissibleBranch { n: i32, big_l: f64 },

    #[error("no nonsingular branch for l = {l}, delta = {delta}; inspected (n, L) = {candidates:?}")]
    NoNonsingularBranch {
        l: f64,
        delta: f64,
        candidates: Vec<(i32, f64)>,
    },

    #[error("insufficient dynamic range: {0}")]
    InsufficientRange(String),

    #[error("potential not finite at x = {x}")]
    NonFinitePotential { x: f64 },

    #[error("phase shift not converged: estimate {estimate:e} above tolerance {tolerance:e}")]
    PhaseNotConverged { estimate: f64, tolerance: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
