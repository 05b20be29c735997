use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("finite-difference step underflow at rho = {rho}")]
    StepUnderflow { rho: f64 },

    #[error("no resonance: target frequency {omega} outside {range}")]
    NoResonance { omega: f64, range: &'static str },

    #[error("degenerate resonance: no amplitude term and B = 0")]
    DegenerateCase,

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("integrator step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("could not resolve fold: {0}")]
    FoldResolutionFailure(String),

    #[error("ambiguous section crossing: {0}")]
    SectionAmbiguity(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("trace stalled: {0}")]
    TraceStall(String),

    #[error("no probe point found for {0}")]
    ProbeNotFound(String),

    #[error("ambiguous bisection: {0}")]
    BisectionAmbiguity(String),

    #[error("precondition not met: {0}")]
    PreconditionWarning(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
