use thiserror::Error;

use crate::hamiltonian::ClassTag;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument sits on (or within the exclusion radius of) a pole.
    #[error("{what}: argument {value} is within the exclusion radius of a pole")]
    Pole { what: &'static str, value: f64 },

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The parameter pair is not in the admissible class for the operation.
    #[error("parameter pair is outside the admissible class ({0:?})")]
    NotInClass(ClassTag),

    /// Two parameter pairs of different order were compared.
    #[error("order mismatch: p = {left} vs p = {right}")]
    OrderMismatch { left: f64, right: f64 },

    /// A series did not reach its tail criterion within the term budget.
    #[error("{what}: no convergence within {terms} terms")]
    NoConvergence { what: &'static str, terms: usize },

    /// Cancellation in a series exceeds what the working precision can absorb.
    #[error("{what}: cancellation loses {digits:.1} digits")]
    Cancellation { what: &'static str, digits: f64 },

    /// The asymptotic expansion was requested outside its sector.
    #[error("argument {re} + {im}i is outside the asymptotic sector")]
    Sector { re: f64, im: f64 },

    /// A certified bound exceeds the requested tolerance.
    #[error("{what}: bound {bound:e} exceeds tolerance {tol:e}")]
    ToleranceExceeded { what: &'static str, bound: f64, tol: f64 },

    /// The ODE integrator could not keep the step size above its floor.
    #[error("step size underflow at t = {at} (h = {step:e})")]
    StepUnderflow { at: f64, step: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge (estimated error {estimate:e})")]
    Quadrature { estimate: f64 },

    /// The Weyl limit did not settle within the integration range.
    #[error("Weyl coefficient diverges (Cauchy estimate {estimate:e})")]
    WeylDivergence { estimate: f64 },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors that signal bad input rather than numerical trouble.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. }
                | Error::Precondition(_)
                | Error::NotInClass(_)
                | Error::OrderMismatch { .. }
                | Error::Sector { .. }
        )
    }
}
