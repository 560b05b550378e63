//! Complex special functions: log-gamma, Pochhammer symbols, Kummer's `M`,
//! the limit function `0F1`, Bessel `J` and `I`, and a large-argument
//! evaluator for `M`.
//!
//! Power series are summed in double-double arithmetic so that the
//! cancellation of size `e^{|z|}` seen on the imaginary axis does not eat the
//! result.

mod bessel;
mod gamma;
mod kummer;

pub use bessel::{bessel_i, bessel_j};
pub use gamma::{gamma, log_gamma, pochhammer, rgamma};
pub use kummer::{
    hyp0f1, kummer_m, kummer_m_asymptotic, kummer_m_eval, kummer_m_large, AsymptoticValue,
};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance from a pole below which evaluation is refused.
pub const POLE_RADIUS: f64 = 1e-8;

/// Default `|z|` above which [`kummer_m_eval`] tries the asymptotic evaluator.
pub const DEFAULT_CROSSOVER: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Radius at which [`kummer_m_eval`] switches to the asymptotic path.
    pub crossover: f64,
}

impl Tolerance {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(Error::precondition(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::precondition("max_terms must be at least 1"));
        }
        Ok(Tolerance {
            rel_tol,
            max_terms,
            crossover: DEFAULT_CROSSOVER,
        })
    }

    pub fn with_crossover(mut self, crossover: f64) -> Self {
        self.crossover = crossover;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel_tol: 1e-15,
            max_terms: 20_000,
            crossover: DEFAULT_CROSSOVER,
        }
    }
}

/// Arguments of `M(a, b, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KummerArgs {
    pub a: Complex64,
    pub b: f64,
    pub z: Complex64,
}

impl KummerArgs {
    pub fn new(a: Complex64, b: f64, z: Complex64) -> Result<Self> {
        check_not_nonpositive_integer("kummer_m b", b)?;
        Ok(KummerArgs { a, b, z })
    }
}

pub(crate) fn check_not_nonpositive_integer(what: &'static str, b: f64) -> Result<()> {
    if !b.is_finite() {
        return Err(Error::precondition(format!("{what}: non-finite parameter")));
    }
    if b < 0.5 && (b - b.round()).abs() < POLE_RADIUS {
        return Err(Error::Pole { what, value: b });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 10).is_err());
        assert!(Tolerance::new(1e-12, 0).is_err());
        assert!(Tolerance::new(1e-12, 1).is_ok());
    }

    #[test]
    fn kummer_args_reject_poles() {
        let one = Complex64::new(1.0, 0.0);
        assert!(KummerArgs::new(one, 0.0, one).is_err());
        assert!(KummerArgs::new(one, -3.0 + 1e-10, one).is_err());
        assert!(KummerArgs::new(one, -2.5, one).is_ok());
        assert!(KummerArgs::new(one, 1e-6, one).is_ok());
    }
}
