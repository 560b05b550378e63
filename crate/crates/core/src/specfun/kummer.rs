use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{log_gamma, rgamma};
use super::{check_not_nonpositive_integer, KummerArgs, Tolerance};
use crate::dd::{Dd, DdComplex};
use crate::error::{Error, Result};

// Relative size of double-double rounding per accumulated term.
const DD_EPS: f64 = 1e-30;
// Loss of accuracy tolerated from cancellation before the series refuses.
const CANCELLATION_LIMIT: f64 = 1e-12;

/// Sum `sum_n t_n` with `t_0 = 1` and `t_{n+1} = t_n * step(n)`.
///
/// `bound(n)` must dominate `|t_{m+1}/t_m|` for every `m >= n` whenever it
/// returns `Some`; the tail after `t_n` is then at most `|t_n| r/(1-r)`.
fn sum_series(
    what: &'static str,
    tol: Tolerance,
    step: impl Fn(usize) -> DdComplex,
    bound: impl Fn(usize) -> Option<f64>,
) -> Result<Complex64> {
    let mut term = DdComplex::ONE;
    let mut sum = DdComplex::ONE;
    let mut abs_sum = 1.0;
    for n in 0..tol.max_terms {
        let t_abs = term.norm_f64();
        let s_abs = sum.norm_f64();
        if let Some(r) = bound(n) {
            if r < 1.0 {
                let tail = t_abs * r / (1.0 - r);
                if tail <= tol.rel_tol * s_abs || tail <= DD_EPS * abs_sum {
                    let est = DD_EPS * abs_sum;
                    if est > tol.rel_tol.max(CANCELLATION_LIMIT) * s_abs {
                        let digits = if s_abs > 0.0 {
                            (abs_sum / s_abs).log10()
                        } else {
                            f64::INFINITY
                        };
                        return Err(Error::Cancellation { what, digits });
                    }
                    return Ok(sum.to_c64());
                }
            }
        }
        term = term * step(n);
        if !term.is_finite() {
            return Err(Error::NoConvergence { what, terms: n + 1 });
        }
        sum += term;
        abs_sum += term.norm_f64();
    }
    Err(Error::NoConvergence {
        what,
        terms: tol.max_terms,
    })
}

fn dd_real_plus(x: f64, n: usize) -> Dd {
    Dd::from(x) + Dd::from(n as f64)
}

/// Kummer's function `M(a, b, z)` from its Taylor series.
pub fn kummer_m(args: KummerArgs, tol: Tolerance) -> Result<Complex64> {
    let KummerArgs { a, b, z } = args;
    check_not_nonpositive_integer("kummer_m b", b)?;
    let zd = DdComplex::from(z);
    let amb = (a - b).norm();
    let zn = z.norm();
    sum_series(
        "kummer_m",
        tol,
        |n| {
            let an = DdComplex::new(dd_real_plus(a.re, n), Dd::from(a.im));
            let den = dd_real_plus(b, n) * Dd::from(n as f64 + 1.0);
            (an * zd).scale(den.recip())
        },
        |n| {
            let bn = b + n as f64;
            (bn > 0.0).then(|| (1.0 + amb / bn) * zn / (n as f64 + 1.0))
        },
    )
}

/// The confluent limit function `0F1(; b; z)`.
pub fn hyp0f1(b: f64, z: Complex64, tol: Tolerance) -> Result<Complex64> {
    check_not_nonpositive_integer("hyp0f1 b", b)?;
    let zd = DdComplex::from(z);
    let zn = z.norm();
    sum_series(
        "hyp0f1",
        tol,
        |n| {
            let den = dd_real_plus(b, n) * Dd::from(n as f64 + 1.0);
            zd.scale(den.recip())
        },
        |n| {
            let bn = b + n as f64;
            (bn > 0.0).then(|| zn / (bn * (n as f64 + 1.0)))
        },
    )
}

// Normalise a signed zero so that negative real arguments sit on ph z = pi.
fn tidy(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

// Prefactors of the algebraic and exponential parts of the expansion.
fn prefactors(a: Complex64, b: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    let i = Complex64::i();
    let lgb = log_gamma(Complex64::new(b, 0.0))?;
    let lz = z.ln();
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let bc = Complex64::new(b, 0.0);
    let alg = (lgb + sign * i * PI * a - a * lz).exp() * rgamma(bc - a);
    let exp = (lgb + z + (a - bc) * lz).exp() * rgamma(a);
    Ok((alg, exp))
}

/// Leading-order large-argument form of `M(a, b, z)`:
/// `Gamma(b) [e^{+-i pi a} z^{-a}/Gamma(b-a) + e^z z^{a-b}/Gamma(a)]`.
///
/// Only arguments with `|Re z| <= |Im z|` and `|z| >= 1` are accepted; the
/// relative error there is `O(1/|z|)`.
pub fn kummer_m_asymptotic(a: Complex64, b: f64, z: Complex64) -> Result<Complex64> {
    check_not_nonpositive_integer("kummer_m_asymptotic b", b)?;
    if z.re.abs() > z.im.abs() || z.norm() < 1.0 {
        return Err(Error::Sector { re: z.re, im: z.im });
    }
    let (alg, exp) = prefactors(a, b, tidy(z))?;
    Ok(alg + exp)
}

/// Value of an asymptotic evaluation together with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticValue {
    pub value: Complex64,
    pub error: f64,
}

// Sum of sum_s (x)_s (y)_s / s! * u^s, cut before its smallest term.
// Returns the partial sum and the modulus of the first omitted term.
fn optimal_sum(x: Complex64, y: Complex64, u: Complex64, max_terms: usize) -> (Complex64, f64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = 1.0;
    for s in 0..max_terms {
        let next = term * (x + s as f64) * (y + s as f64) * u / (s as f64 + 1.0);
        let next_abs = next.norm();
        if next_abs == 0.0 {
            return (sum, 0.0);
        }
        if next_abs >= prev {
            return (sum, next_abs);
        }
        if next_abs <= f64::EPSILON * 1e-3 * sum.norm() {
            return (sum + next, next_abs);
        }
        sum += next;
        term = next;
        prev = next_abs;
    }
    (sum, prev)
}

/// Large-`|z|` expansion of `M(a, b, z)` with both series truncated at their
/// smallest term. Valid for any phase; the estimate is only meaningful once
/// `|z|` is large compared to `|a|` and `b`.
pub fn kummer_m_large(a: Complex64, b: f64, z: Complex64) -> Result<AsymptoticValue> {
    check_not_nonpositive_integer("kummer_m_large b", b)?;
    if z.norm() < 1.0 {
        return Err(Error::Sector { re: z.re, im: z.im });
    }
    let z = tidy(z);
    let (alg, exp) = prefactors(a, b, z)?;
    let one = Complex64::new(1.0, 0.0);
    let bc = Complex64::new(b, 0.0);
    let (s1, e1) = optimal_sum(a, a - bc + one, -one / z, 400);
    let (s2, e2) = optimal_sum(bc - a, one - a, one / z, 400);
    let value = alg * s1 + exp * s2;
    let error = alg.norm() * e1 + exp.norm() * e2 + f64::EPSILON * (alg * s1).norm().max((exp * s2).norm());
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NoConvergence {
            what: "kummer_m_large",
            terms: 0,
        });
    }
    Ok(AsymptoticValue { value, error })
}

/// `M(a, b, z)` by the Taylor series up to `tol.crossover`, and beyond it by
/// the large-argument expansion when that meets `tol`, falling back to the
/// series otherwise.
pub fn kummer_m_eval(a: Complex64, b: f64, z: Complex64, tol: Tolerance) -> Result<Complex64> {
    let args = KummerArgs::new(a, b, z)?;
    if z.norm() <= tol.crossover {
        return kummer_m(args, tol);
    }
    let large = kummer_m_large(a, b, z);
    if let Ok(v) = &large {
        if v.error <= tol.rel_tol.max(1e-13) * v.value.norm() {
            return Ok(v.value);
        }
    }
    match kummer_m(args, tol) {
        Ok(v) => Ok(v),
        Err(e) => match large {
            // the two exponential scales cancel; accept a few lost digits
            Ok(v) if v.error <= LARGE_FALLBACK_TOL * v.value.norm() => Ok(v.value),
            _ => Err(e),
        },
    }
}

const LARGE_FALLBACK_TOL: f64 = 1e-10;
