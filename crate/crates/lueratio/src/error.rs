use thiserror::Error;

/// Failure modes shared by every numerical route.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("value overflows the double range: {0}")]
    Overflow(&'static str),
    #[error("singular system at x = {x}: {what}")]
    Singular { x: f64, what: &'static str },
    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("trajectory left the physical branch at x = {x}")]
    BranchViolation { x: f64 },
    #[error("x = {x} outside the trajectory domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("precision of {bits} bits is insufficient (non-positive pivot)")]
    PrecisionInsufficient { bits: usize },
    #[error("tolerance not met: estimate {estimate:e} exceeds {tol:e}")]
    ToleranceNotMet { estimate: f64, tol: f64 },
    #[error("integration lost the requested accuracy beyond x = {x}")]
    LostAccuracy { x: f64 },
    #[error("tail bound failure: {0}")]
    TailBound(&'static str),
    #[error("eigensolver did not converge")]
    Eigensolver,
}

pub type Result<T> = core::result::Result<T, Error>;
