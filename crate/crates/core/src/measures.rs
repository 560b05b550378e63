//! Spectral measures of homogeneous chains: the power law `mu_(+/-) |x|^{2p}`,
//! its inverse construction, the asymptotic modulus law behind it, and a
//! numerical comparison against the Weyl coefficient.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::canonical::q_ec;
use crate::closedform::DEGENERATE_DET;
use crate::error::{Error, Result};
use crate::hamiltonian::{in_class_pp, rescale_params, simeq_equiv, ClassTag};
use crate::quad::{integrate_line, QuadOptions};
use crate::recurrence::{check_order, ParamPair};
use crate::spaces::{xi_hat, BackendChoice, EntirePair, PairFn};
use crate::specfun::{gamma, kummer_m_eval, log_gamma, Tolerance};

/// Density `mu_plus x^exponent` on `x > 0` and `mu_minus |x|^exponent` on `x < 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerMeasure {
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub exponent: f64,
}

impl PowerMeasure {
    pub fn new(mu_plus: f64, mu_minus: f64, exponent: f64) -> Result<Self> {
        if !(mu_plus >= 0.0 && mu_minus >= 0.0 && mu_plus.is_finite() && mu_minus.is_finite()) {
            return Err(Error::precondition("measure constants must be finite and nonnegative"));
        }
        if mu_plus == 0.0 && mu_minus == 0.0 {
            return Err(Error::precondition("measure must not vanish on both half-axes"));
        }
        if !(exponent > -1.0 && exponent.is_finite()) {
            return Err(Error::precondition(format!("exponent must exceed -1, got {exponent}")));
        }
        Ok(PowerMeasure {
            mu_plus,
            mu_minus,
            exponent,
        })
    }

    pub fn order(&self) -> f64 {
        0.5 * self.exponent
    }

    /// Radon-Nikodym derivative with respect to Lebesgue measure.
    pub fn density(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.mu_plus * x.powf(self.exponent)
        } else if x < 0.0 {
            self.mu_minus * (-x).powf(self.exponent)
        } else {
            0.0
        }
    }

    /// Mass of the interval `(lo, hi)`.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let e1 = self.exponent + 1.0;
        let prim = |x: f64| {
            if x >= 0.0 {
                self.mu_plus * x.powf(e1) / e1
            } else {
                -self.mu_minus * (-x).powf(e1) / e1
            }
        };
        prim(hi) - prim(lo)
    }

    /// Componentwise agreement up to `rel` relative to the larger constant.
    pub fn approx_eq(&self, other: &PowerMeasure, rel: f64) -> bool {
        let s = self.mu_plus.max(self.mu_minus).max(other.mu_plus).max(other.mu_minus);
        (self.exponent - other.exponent).abs() <= rel
            && (self.mu_plus - other.mu_plus).abs() <= rel * s
            && (self.mu_minus - other.mu_minus).abs() <= rel * s
    }
}

fn require_class(params: &ParamPair) -> Result<()> {
    match in_class_pp(params) {
        ClassTag::InPP => Ok(()),
        tag => Err(Error::NotInClass(tag)),
    }
}

fn is_degenerate(params: &ParamPair) -> bool {
    let n = params.norm();
    params.det().abs() <= DEGENERATE_DET * n * n
}

/// `ln Gamma(2p+1)` for real `2p+1 > 0`.
fn ln_gamma_real(x: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// The constants `mu_(+/-)` of the spectral measure of the chain.
pub fn measure_of(params: &ParamPair) -> Result<PowerMeasure> {
    require_class(params)?;
    let p = params.p;
    let k1 = params.kappa1;
    let sigma = params.sigma();
    let lg = ln_gamma_real(2.0 * p + 1.0)?;
    if is_degenerate(params) {
        let m = (PI.ln() + (2.0 * p + 1.0) * sigma.abs().ln() - k1.ln() - 2.0 * lg).exp();
        let (mp, mm) = if sigma > 0.0 { (m, 0.0) } else { (0.0, m) };
        return PowerMeasure::new(mp, mm, 2.0 * p);
    }
    let kappa = params.det().sqrt();
    let t = sigma / (2.0 * kappa);
    let lgam = log_gamma(Complex64::new(p + 1.0, -t))?.re;
    let base = 2.0 * p * 2f64.ln() + (2.0 * p + 1.0) * kappa.ln() + 2.0 * lgam - k1.ln() - 2.0 * lg;
    let e = PI * t;
    PowerMeasure::new((base + e).exp(), (base - e).exp(), 2.0 * p)
}

/// A parameter in the class whose measure is `target`, normally with
/// `k1 = 1, k3 = 0`.
pub fn params_of_measure(target: &PowerMeasure) -> Result<ParamPair> {
    let target = PowerMeasure::new(target.mu_plus, target.mu_minus, target.exponent)?;
    let p = target.order();
    check_order(p)?;
    let lg = ln_gamma_real(2.0 * p + 1.0)?;
    let (mp, mm) = (target.mu_plus, target.mu_minus);
    let x = if mp > 0.0 && mm > 0.0 {
        let s = (mp.ln() - mm.ln()) / (2.0 * PI);
        let lgam = log_gamma(Complex64::new(p + 1.0, s))?.re;
        let ln_root = 2.0 * lg + 0.5 * (mp.ln() + mm.ln()) - 2.0 * p * 2f64.ln() - 2.0 * lgam;
        let kappa = (ln_root / (2.0 * p + 1.0)).exp();
        ParamPair::new(p, 1.0, 0.0, kappa * kappa, -2.0 * kappa * s)?
    } else {
        let (m, sign) = if mp > 0.0 { (mp, -1.0) } else { (mm, 1.0) };
        let psi = sign * ((m.ln() - PI.ln() + 2.0 * lg) / (2.0 * p + 1.0)).exp();
        ParamPair::new(p, 1.0, 0.0, 0.0, psi)?
    };
    if in_class_pp(&x) == ClassTag::InPP || p == 0.0 || x.kappa2 == 0.0 {
        require_class(&x)?;
        return Ok(x);
    }
    // badly scaled representative: rescale so that k1 = k2
    let c = x.kappa2.powf(1.0 / (4.0 * p));
    let y = rescale_params(&x, c)?;
    require_class(&y)?;
    Ok(y)
}

/// The normalised generator `E` with `E(0) = 1`, `K_E(0, 0) = 1` and
/// spectral measure `target`.
pub fn build_generator(target: &PowerMeasure) -> Result<EntirePair> {
    let x = params_of_measure(target)?;
    let p = x.p;
    // k1 -> c^{1+2p} k1 = 1 + 2p
    let c = ((1.0 + 2.0 * p) / x.kappa1).powf(1.0 / (1.0 + 2.0 * p));
    let y = rescale_params(&x, c)?;
    let y = ParamPair::new(p, 1.0 + 2.0 * p, y.kappa3, y.kappa2, y.psi)?;
    xi_hat(&y, BackendChoice::Closed)
}

/// Equality of the spectral measures, decided on the rescaling invariants.
pub fn measure_equiv(x: &ParamPair, y: &ParamPair) -> Result<bool> {
    simeq_equiv(x, y)
}

/// Modulus of `M(id+p, 2p+1, -iy)/2 + M(id+p+1, 2p+1, -iy)/2
/// - i y M(id+p+1, 2p+2, -iy) / (2(2p+1))` over its leading term
/// `Gamma(2p+1) / |Gamma(id+p+1)| e^{+/- pi d/2} |y|^-p`.
pub fn asymptotic_ratio(delta: f64, p: f64, y: f64, tol: Tolerance) -> Result<f64> {
    if !(y.abs() >= 1.0 && y.is_finite()) {
        return Err(Error::precondition(format!("need |y| >= 1, got {y}")));
    }
    check_order(p)?;
    let b = 2.0 * p + 1.0;
    let a = Complex64::new(p, delta);
    let w = Complex64::new(0.0, -y);
    let m1 = kummer_m_eval(a, b, w, tol)?;
    let m2 = kummer_m_eval(a + 1.0, b, w, tol)?;
    let m3 = kummer_m_eval(a + 1.0, b + 1.0, w, tol)?;
    let lhs = (0.5 * (m1 + m2) - Complex64::i() * y / (2.0 * b) * m3).norm();
    let sign = if y > 0.0 { 1.0 } else { -1.0 };
    let ln_rhs = log_gamma(Complex64::new(b, 0.0))?.re - log_gamma(Complex64::new(p + 1.0, delta))?.re
        + sign * 0.5 * PI * delta
        - p * y.abs().ln();
    Ok(lhs / ln_rhs.exp())
}

/// Least-squares fit of `|ratio - 1| ~ C / |y|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub c: f64,
    /// Largest `|ratio - 1| |y|` over the samples.
    pub max_scaled: f64,
}

pub fn fit_decay(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.is_empty() {
        return Err(Error::precondition("no samples to fit"));
    }
    let (mut num, mut den, mut max_scaled) = (0.0, 0.0, 0.0f64);
    for &(y, r) in samples {
        let u = 1.0 / y.abs();
        num += u * (r - 1.0).abs();
        den += u * u;
        max_scaled = max_scaled.max((r - 1.0).abs() * y.abs());
    }
    Ok(DecayFit {
        c: num / den,
        max_scaled,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityCheck {
    /// `Im q(x + iy)` from the Weyl coefficient.
    pub observed: f64,
    /// Poisson integral of `|E|^2` against the spectral measure.
    pub predicted: f64,
    /// Tolerance plus the first-order smoothing allowance.
    pub allowed: f64,
}

impl DensityCheck {
    pub fn passed(&self) -> bool {
        (self.observed - self.predicted).abs() <= self.allowed
    }
}

/// Compare `Im q_{E,C}(x + iy)` with `(1/pi) int y |E(t)|^2 dmu(t) / ((t-x)^2 + y^2)`.
pub fn density_check(params: &ParamPair, x: f64, y: f64, t_max: f64, tol: f64) -> Result<DensityCheck> {
    require_class(params)?;
    if x == 0.0 || !x.is_finite() {
        return Err(Error::precondition("density check needs x != 0"));
    }
    if !(y > 0.0 && y <= 0.1 * x.abs()) {
        return Err(Error::precondition(format!("need 0 < y <= |x|/10, got y = {y}")));
    }
    let mu = measure_of(params)?;
    let e = xi_hat(params, BackendChoice::Closed)?;
    let weight = |t: f64| -> Result<f64> { Ok(e.e(Complex64::new(t, 0.0))?.norm_sqr() * mu.density(t)) };
    let mut breaks = vec![0.0, x];
    for k in [1.0, 10.0, 100.0] {
        breaks.extend([x - k * y, x + k * y]);
    }
    let opts = QuadOptions {
        abs_tol: tol * 1e-3,
        rel_tol: tol * 1e-2,
        max_intervals: 40_000,
    };
    let line = integrate_line(
        |t| {
            let d = t - x;
            Ok(Complex64::new(y / (d * d + y * y) * weight(t)?, 0.0))
        },
        &breaks,
        tol * 1e-2,
        1e6,
        opts,
    )?;
    let predicted = line.value.re / PI;
    let observed = q_ec(params, Complex64::new(x, y), t_max, tol * 1e-2)?.im;
    let h = y.max(1e-3 * x.abs());
    let slope = (weight(x + h)? - weight(x - h)?).abs() / (2.0 * h);
    Ok(DensityCheck {
        observed,
        predicted,
        allowed: tol + 3.0 * y * slope + line.tail / PI,
    })
}

/// `Gamma(x)` for real positive `x`, used by tests and callers checking the
/// gamma-modulus identities.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma(Complex64::new(x, 0.0))?.re)
}
