use std::fmt;

use thiserror::Error;

/// Why a trajectory failed to come back to its section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoReturnReason {
    ConvergedToPoint,
    BlowUp,
    TimeLimit,
    /// A full turn in the opposite sense of rotation.
    Reversed,
}

impl fmt::Display for NoReturnReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NoReturnReason::ConvergedToPoint => "trajectory converged to an equilibrium",
            NoReturnReason::BlowUp => "trajectory left the blow-up radius",
            NoReturnReason::TimeLimit => "time horizon exhausted",
            NoReturnReason::Reversed => "trajectory reversed its sense of rotation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("hypothesis |s2|>1 violated (s2 = {s2})")]
    RequiresS2 { s2: f64 },
    #[error("p = p1 + i p2 must be nonzero")]
    ZeroP,
    #[error("p2 = 0: the Abel reduction is undefined; integrate the planar system directly")]
    ZeroP2,
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("(r = {r}, theta = {theta}) is not an equilibrium (residual {residual:e})")]
    NotAnEquilibrium { r: f64, theta: f64, residual: f64 },
    #[error("state lies on the set where theta' = 0")]
    OnSingularSet,
    #[error("x = 1/c(theta) is the image of infinity")]
    AtInfinity,
    #[error("step size underflow at s = {s}")]
    StepFailure { s: f64 },
    #[error("no first return: {0}")]
    NoReturn(NoReturnReason),
    #[error("section ray is tangent to the flow at r = {r}")]
    SectionTangency { r: f64 },
    #[error("displacement has the same sign at both bracket ends ({lo:e}, {hi:e})")]
    NoBracket { lo: f64, hi: f64 },
    #[error("parameters are not on the Q = 0 stratum (Q = {q:e})")]
    NotOnStratum { q: f64 },
    #[error("no transversal polygon found")]
    TransversalityFailed,
}

pub type Result<T> = std::result::Result<T, Error>;
