//! Adaptive Dormand-Prince 5(4) integration of complex ODE systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-11,
            atol: 1e-13,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOutput<const N: usize> {
    pub y: [Complex64; N],
    pub steps: usize,
    /// Sum of the local error estimates of accepted steps.
    pub error: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo<const N: usize>(y: &[Complex64; N], h: f64, terms: &[(f64, &[Complex64; N])]) -> [Complex64; N] {
    let mut out = *y;
    for &(w, k) in terms {
        if w != 0.0 {
            for i in 0..N {
                out[i] += k[i] * (h * w);
            }
        }
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
pub fn dopri5<const N: usize, F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [Complex64; N],
    opts: OdeOptions,
) -> Result<OdeOutput<N>>
where
    F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(OdeOutput {
            y: y0,
            steps: 0,
            error: 0.0,
        });
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-2).min(0.1).max(1e-6 * span.abs());
    let mut k1 = f(t, &y);
    let mut steps = 0;
    let mut total_err = 0.0;
    let mut attempts = 0;
    while (t1 - t) * dir > 0.0 {
        attempts += 1;
        if attempts > opts.max_steps {
            return Err(Error::StepUnderflow { at: t, step: h });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &combo(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &combo(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &combo(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = combo(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y_new);
        let mut err = 0.0f64;
        let mut err_abs = 0.0f64;
        for i in 0..N {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            err = err.max(e.norm() / sc);
            err_abs = err_abs.max(e.norm());
        }
        if !err.is_finite() {
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = k7;
            steps += 1;
            total_err += err_abs;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        let fac = if err > 1.0 { fac.min(1.0) } else { fac };
        h *= fac;
        if h.abs() < 1e-14 * t.abs().max(1.0) && (t1 - t) * dir > 0.0 {
            return Err(Error::StepUnderflow { at: t, step: h });
        }
    }
    Ok(OdeOutput {
        y,
        steps,
        error: total_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let out = dopri5(|_, y| [y[0]], 0.0, 2.0, [Complex64::new(1.0, 0.0)], OdeOptions::default()).unwrap();
        assert!((out.y[0].re - 2f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn rotation_backwards() {
        let i = Complex64::i();
        let out = dopri5(|_, y| [i * y[0]], 3.0, 0.0, [Complex64::new(1.0, 0.0)], OdeOptions::default()).unwrap();
        assert!((out.y[0] - (-3.0 * i).exp()).norm() < 1e-9);
    }

    #[test]
    fn zero_field_is_exact() {
        let y0 = [Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.0)];
        let out = dopri5(|_, _| [Complex64::new(0.0, 0.0); 2], 0.0, 5.0, y0, OdeOptions::default()).unwrap();
        assert_eq!(out.y, y0);
        assert_eq!(out.error, 0.0);
    }
}
