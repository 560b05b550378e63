use num_complex::Complex64;

use super::gamma::log_gamma;
use super::kummer::{hyp0f1, kummer_m_eval};
use super::Tolerance;
use crate::error::{Error, Result};

fn check_order(nu: f64) -> Result<()> {
    if !(nu > -1.0) {
        return Err(Error::precondition(format!("Bessel order must exceed -1, got {nu}")));
    }
    Ok(())
}

// (z/2)^nu / Gamma(nu+1), principal branch.
fn prefactor(nu: f64, z: Complex64) -> Result<Complex64> {
    let lg = log_gamma(Complex64::new(nu + 1.0, 0.0))?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(if nu == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    Ok((nu * (z / 2.0).ln() - lg).exp())
}

/// `J_nu(z) = (z/2)^nu / Gamma(nu+1) * 0F1(nu+1, -z^2/4)`.
pub fn bessel_j(nu: f64, z: Complex64, tol: Tolerance) -> Result<Complex64> {
    check_order(nu)?;
    Ok(prefactor(nu, z)? * hyp0f1(nu + 1.0, -z * z / 4.0, tol)?)
}

/// `I_nu(z) = (z/2)^nu / Gamma(nu+1) * e^{-z} M(nu+1/2, 2nu+1, 2z)`.
pub fn bessel_i(nu: f64, z: Complex64, tol: Tolerance) -> Result<Complex64> {
    check_order(nu)?;
    let m = kummer_m_eval(Complex64::new(nu + 0.5, 0.0), 2.0 * nu + 1.0, 2.0 * z, tol)?;
    Ok(prefactor(nu, z)? * (-z).exp() * m)
}
