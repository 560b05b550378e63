//! The canonical system `dW/da J = z W H(a)` for the homogeneous Hamiltonian,
//! its closed-form solution family, and the Weyl coefficient of the chain.
//!
//! Integration runs in `u = ln a`, where the system reads
//! `dW/du = -z e^u W H(e^u) J`.

use num_complex::Complex64;

use crate::closedform::ClosedFormParams;
use crate::error::{Error, Result};
use crate::hamiltonian::{h_of, in_class_pp, integrable_at, ClassTag, Endpoint, Matrix2};
use crate::ode::{dopri5, OdeOptions};
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::recurrence::ParamPair;
use crate::specfun::Tolerance;

pub type CMatrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_IDENTITY: CMatrix2 = [[ONE, ZERO], [ZERO, ONE]];

/// Growth allowed inside one integration chunk before renormalising.
const CHUNK_GROWTH: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferResult {
    pub matrix: CMatrix2,
    pub step_count: usize,
    pub est_error: f64,
}

/// Evaluation abscissae (breakpoints) and a quadrature tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub points: Vec<f64>,
    pub quad_tol: f64,
}

impl GridSpec {
    pub fn new(points: Vec<f64>, quad_tol: f64) -> Result<Self> {
        if points.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::precondition("grid points must be positive and finite"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::precondition("grid points must be strictly increasing"));
        }
        if !(quad_tol > 0.0) {
            return Err(Error::precondition("quad_tol must be positive"));
        }
        Ok(GridSpec { points, quad_tol })
    }
}

pub fn cmat_mul(x: &CMatrix2, y: &CMatrix2) -> CMatrix2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn cmat_det(x: &CMatrix2) -> Complex64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

/// Möbius action `W * tau = (w11 tau + w12) / (w21 tau + w22)`.
pub fn mobius(w: &CMatrix2, tau: Complex64) -> Complex64 {
    (w[0][0] * tau + w[0][1]) / (w[1][0] * tau + w[1][1])
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::precondition(format!("endpoint must be a positive real, got {t}")))
    }
}

fn h_times_j(params: &ParamPair, a: f64) -> Matrix2 {
    h_of(params, a).map(|h| h * Matrix2::J).unwrap_or(Matrix2::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN))
}

fn rhs(params: &ParamPair, z: Complex64, u: f64, y: &[Complex64; 4]) -> [Complex64; 4] {
    let a = u.exp();
    let m = h_times_j(params, a);
    let s = -z * a;
    [
        s * (y[0] * m.m11 + y[1] * m.m21),
        s * (y[0] * m.m12 + y[1] * m.m22),
        s * (y[2] * m.m11 + y[3] * m.m21),
        s * (y[2] * m.m12 + y[3] * m.m22),
    ]
}

fn ode_opts(tol: f64) -> OdeOptions {
    OdeOptions {
        rtol: tol / 10.0,
        atol: tol / 1000.0,
        ..OdeOptions::default()
    }
}

fn integrate_from(params: &ParamPair, w0: CMatrix2, t0: f64, t1: f64, z: Complex64, tol: f64) -> Result<(CMatrix2, usize, f64)> {
    let y0 = [w0[0][0], w0[0][1], w0[1][0], w0[1][1]];
    let out = dopri5(|u, y| rhs(params, z, u, y), t0.ln(), t1.ln(), y0, ode_opts(tol)).map_err(|e| match e {
        Error::StepUnderflow { at, step } => Error::StepUnderflow { at: at.exp(), step },
        other => other,
    })?;
    let y = out.y;
    Ok(([[y[0], y[1]], [y[2], y[3]]], out.steps, out.error))
}

/// `W(t0, t1, z)`, the transfer matrix of the canonical system.
pub fn transfer_matrix(params: &ParamPair, t0: f64, t1: f64, z: Complex64, tol: f64) -> Result<TransferResult> {
    check_t(t0)?;
    check_t(t1)?;
    if !(tol > 0.0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    if z == ZERO || t0 == t1 {
        return Ok(TransferResult {
            matrix: C_IDENTITY,
            step_count: 0,
            est_error: 0.0,
        });
    }
    let (m, steps, err) = integrate_from(params, C_IDENTITY, t0, t1, z, tol)?;
    let det_err = (cmat_det(&m) - 1.0).norm();
    Ok(TransferResult {
        matrix: m,
        step_count: steps,
        est_error: err.max(det_err),
    })
}

fn family_at(cf: &ClosedFormParams, params: &ParamPair, a: f64, z: Complex64, tol: Tolerance) -> Result<(Complex64, Complex64)> {
    check_t(a)?;
    let (p, psi) = (params.p, params.psi);
    let (aa, bb) = cf.eval(a * z, tol)?;
    let la = a.ln();
    let shift = if p == 0.0 { psi * la } else { psi * (2.0 * p * la).exp_m1() / (2.0 * p) };
    Ok((aa - shift * bb, (2.0 * p * la).exp() * bb))
}

/// `(A(a, z), B(a, z))`, the row solution with value `(A(z), B(z))` at `a = 1`.
pub fn solution_family(params: &ParamPair, a: f64, z: Complex64, tol: Tolerance) -> Result<(Complex64, Complex64)> {
    let cf = ClosedFormParams::new(params)?;
    family_at(&cf, params, a, z, tol)
}

/// Residual of `(v(b) - v(a)) J = z int_a^b v(c) H(c) dc` with
/// `v(c) = (A(c, z), B(c, z))`, relative to `1 + max |v|` at the endpoints.
pub fn integral_residual(params: &ParamPair, a: f64, b: f64, z: Complex64, quad: &GridSpec) -> Result<f64> {
    check_t(a)?;
    check_t(b)?;
    if a >= b {
        return Err(Error::precondition(format!("need a < b, got a = {a}, b = {b}")));
    }
    let cf = ClosedFormParams::new(params)?;
    let tol = Tolerance::default();
    let (ab0, bb0) = family_at(&cf, params, a, z, tol)?;
    let (ab1, bb1) = family_at(&cf, params, b, z, tol)?;
    // (x, y) J = (y, -x)
    let lhs = [bb1 - bb0, -(ab1 - ab0)];
    let mut breaks = vec![a];
    breaks.extend(quad.points.iter().copied().filter(|&x| x > a && x < b));
    breaks.push(b);
    let opts = QuadOptions {
        abs_tol: quad.quad_tol * 1e-2,
        rel_tol: quad.quad_tol * 1e-2,
        ..QuadOptions::default()
    };
    let integral = integrate_with_breaks(
        |c| {
            let (x, y) = family_at(&cf, params, c, z, tol)?;
            let h = h_of(params, c)?;
            Ok([x * h.m11 + y * h.m21, x * h.m12 + y * h.m22])
        },
        &breaks,
        opts,
    )?;
    let r0 = (lhs[0] - z * integral.value[0]).norm();
    let r1 = (lhs[1] - z * integral.value[1]).norm();
    let scale = 1.0 + ab0.norm().max(bb0.norm()).max(ab1.norm()).max(bb1.norm());
    Ok(r0.max(r1) / scale)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylResult {
    pub q: Complex64,
    /// `|q(t_max) - q(t_max / 2)|`.
    pub cauchy_estimate: f64,
    pub step_count: usize,
}

fn weyl_preconditions(params: &ParamPair, t_max: f64, z: Complex64) -> Result<()> {
    match in_class_pp(params) {
        ClassTag::InPP => {}
        tag => return Err(Error::NotInClass(tag)),
    }
    if integrable_at(params, Endpoint::Infinity) {
        return Err(Error::precondition("Hamiltonian is integrable at infinity"));
    }
    if z.im == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::precondition(format!("z = {z} must be non-real")));
    }
    if !(t_max >= 1.0 && t_max.is_finite()) {
        return Err(Error::precondition(format!("t_max must be at least 1, got {t_max}")));
    }
    Ok(())
}

fn normalise(w: &mut CMatrix2) {
    let m = w.iter().flatten().fold(0.0f64, |m, x| m.max(x.norm()));
    if m > 0.0 && m.is_finite() {
        for x in w.iter_mut().flatten() {
            *x /= m;
        }
    }
}

fn chunk_end(params: &ParamPair, z: Complex64, a: f64, t_end: f64) -> f64 {
    let rate = |c: f64| {
        let h = h_of(params, c).map(|h| h.max_abs()).unwrap_or(0.0);
        z.norm() * c * h * 2.0
    };
    let mut du = 1.0f64;
    // shrink until the crude growth bound over the chunk stays moderate
    while du > 1e-6 {
        let b = (a.ln() + du).exp().min(t_end);
        if rate(a).max(rate(b)) * du <= CHUNK_GROWTH {
            return b;
        }
        du *= 0.5;
    }
    (a.ln() + du).exp().min(t_end)
}

fn propagate(params: &ParamPair, w: &mut CMatrix2, from: f64, to: f64, z: Complex64, tol: f64) -> Result<usize> {
    let mut a = from;
    let mut steps = 0;
    while a < to {
        let b = chunk_end(params, z, a, to);
        let (m, s, _) = integrate_from(params, *w, a, b, z, tol)?;
        *w = m;
        normalise(w);
        steps += s;
        a = b;
    }
    Ok(steps)
}

/// `W(1, t_max, z) * i`, approximating the Weyl coefficient of the chain.
pub fn weyl_coefficient(params: &ParamPair, t_max: f64, z: Complex64, tol: f64) -> Result<WeylResult> {
    weyl_preconditions(params, t_max, z)?;
    let tau = Complex64::i();
    let mut w = C_IDENTITY;
    let half = 0.5 * t_max;
    let mut steps = 0;
    let q_half = if half > 1.0 {
        steps += propagate(params, &mut w, 1.0, half, z, tol)?;
        mobius(&w, tau)
    } else {
        tau
    };
    steps += propagate(params, &mut w, half.max(1.0), t_max, z, tol)?;
    let q = mobius(&w, tau);
    if !q.re.is_finite() || !q.im.is_finite() {
        return Err(Error::WeylDivergence { estimate: f64::INFINITY });
    }
    Ok(WeylResult {
        q,
        cauchy_estimate: (q - q_half).norm(),
        step_count: steps,
    })
}

/// `q_{E,C}(z) = (A B; -B A) * (-1 / q_H(z))`.
pub fn q_ec(params: &ParamPair, z: Complex64, t_max: f64, tol: f64) -> Result<Complex64> {
    let qh = weyl_coefficient(params, t_max, z, tol)?.q;
    let (a, b) = ClosedFormParams::new(params)?.eval(z, Tolerance::default())?;
    let tau = -1.0 / qh;
    Ok((a * tau + b) / (-b * tau + a))
}
