//! `(A, B)` in closed form through Kummer's function (when `det P != 0`) or
//! through `0F1` (when `det P = 0`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::recurrence::{check_order, solve_for_radius, ParamPair};
use crate::specfun::{hyp0f1, kummer_m_eval, Tolerance};

/// `|det P| <= DEGENERATE_DET * ||P||^2` selects the `0F1` branch.
pub const DEGENERATE_DET: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormParams {
    pub base: ParamPair,
    pub sigma: f64,
    /// A square root of `det P`: nonnegative when `det P >= 0`, else `i sqrt(-det P)`.
    pub kappa: Complex64,
    /// `sigma/(2 i kappa) + p`; `None` on the `det P = 0` branch.
    pub alpha: Option<Complex64>,
}

impl ClosedFormParams {
    pub fn new(base: &ParamPair) -> Result<Self> {
        check_order(base.p)?;
        let det = base.det();
        let n = base.norm();
        if det.abs() <= DEGENERATE_DET * n * n {
            return Ok(ClosedFormParams {
                base: *base,
                sigma: base.sigma(),
                kappa: Complex64::new(0.0, 0.0),
                alpha: None,
            });
        }
        Self::with_kappa(base, principal_root(det))
    }

    /// Uses the given root of `det P` and the `M` branch regardless of how
    /// small `det P` is.
    pub fn with_kappa(base: &ParamPair, kappa: Complex64) -> Result<Self> {
        check_order(base.p)?;
        if kappa.norm() == 0.0 {
            return Err(Error::precondition("the Kummer branch needs kappa != 0"));
        }
        let sigma = base.sigma();
        let alpha = sigma / (2.0 * Complex64::i() * kappa) + base.p;
        Ok(ClosedFormParams {
            base: *base,
            sigma,
            kappa,
            alpha: Some(alpha),
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha.is_none()
    }

    /// `A(z)` together with `B(z)/z`.
    pub fn eval_parts(&self, z: Complex64, tol: Tolerance) -> Result<(Complex64, Complex64)> {
        let p = self.base.p;
        let b1 = 2.0 * p + 1.0;
        let k1 = self.base.kappa1;
        let k3 = self.base.kappa3;
        match self.alpha {
            Some(alpha) => {
                let i = Complex64::i();
                let w = -2.0 * i * self.kappa * z;
                let e = (i * self.kappa * z).exp();
                let m1 = kummer_m_eval(alpha, b1, w, tol)?;
                let m2 = kummer_m_eval(alpha + 1.0, b1, w, tol)?;
                let m3 = kummer_m_eval(alpha + 1.0, b1 + 1.0, w, tol)?;
                let a = e * (0.5 * m1 + 0.5 * m2 - k3 / b1 * z * m3);
                Ok((a, e * k1 / b1 * m3))
            }
            None => {
                let u = -self.sigma * z;
                let f1 = hyp0f1(b1, u, tol)?;
                let f2 = hyp0f1(b1 + 1.0, u, tol)?;
                Ok((f1 - k3 / b1 * z * f2, k1 / b1 * f2))
            }
        }
    }

    pub fn eval(&self, z: Complex64, tol: Tolerance) -> Result<(Complex64, Complex64)> {
        let (a, bz) = self.eval_parts(z, tol)?;
        Ok((a, z * bz))
    }
}

fn principal_root(det: f64) -> Complex64 {
    if det >= 0.0 {
        Complex64::new(det.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-det).sqrt())
    }
}

/// `(A(z), B(z))` from the closed forms.
pub fn eval_closed(cfp: &ClosedFormParams, z: Complex64, tol: Tolerance) -> Result<(Complex64, Complex64)> {
    cfp.eval(z, tol)
}

/// `(A, B)` through `F = e^{i kappa z} M(alpha+1, 2p+1, w)` and
/// `G = e^{i kappa z} M(alpha, 2p+1, w)`: `A = (F+G)/2`,
/// `B = i k1/(2 kappa) (F - G)`. Needs `det P != 0` and `k3 = 0`.
pub fn eval_fg_form(cfp: &ClosedFormParams, z: Complex64, tol: Tolerance) -> Result<(Complex64, Complex64)> {
    let alpha = cfp
        .alpha
        .ok_or_else(|| Error::precondition("the F/G form needs det P != 0"))?;
    if cfp.base.kappa3.abs() > DEGENERATE_DET * cfp.base.norm() {
        return Err(Error::precondition("the F/G form needs k3 = 0"));
    }
    let i = Complex64::i();
    let b1 = 2.0 * cfp.base.p + 1.0;
    let w = -2.0 * i * cfp.kappa * z;
    let e = (i * cfp.kappa * z).exp();
    let f = e * kummer_m_eval(alpha + 1.0, b1, w, tol)?;
    let g = e * kummer_m_eval(alpha, b1, w, tol)?;
    let a = 0.5 * (f + g);
    let b = i * cfp.base.kappa1 / (2.0 * cfp.kappa) * (f - g);
    Ok((a, b))
}

/// Largest of `|A_series - A_closed|` and `|B_series - B_closed|` over
/// `1 + |A| + |B|`.
pub fn crosscheck(params: &ParamPair, z: Complex64, tol: Tolerance) -> Result<f64> {
    let seq = solve_for_radius(params, z.norm(), 1e-17)?;
    let s = seq.eval(z);
    let (a, b) = ClosedFormParams::new(params)?.eval(z, tol)?;
    let scale = 1.0 + a.norm() + b.norm();
    Ok((s.a - a).norm().max((s.b - b).norm()) / scale)
}
