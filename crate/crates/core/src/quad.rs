//! Globally adaptive Gauss-Kronrod (7/15) quadrature for vector-valued
//! complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult<const N: usize> {
    pub value: [Complex64; N],
    pub error: f64,
    pub evals: usize,
}

struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Piece<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Piece<N> {}
impl<const N: usize> PartialOrd for Piece<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Piece<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn max_norm<const N: usize>(v: &[Complex64; N]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| {
        let n = x.norm();
        if n.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(n)
        }
    })
}

fn kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Piece<N>>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let zero = [Complex64::new(0.0, 0.0); N];
    let mut k = zero;
    let mut g = zero;
    let fc = f(c)?;
    for i in 0..N {
        k[i] = fc[i] * WGK[7];
        g[i] = fc[i] * WG[3];
    }
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x)?;
        let f2 = f(c + x)?;
        for i in 0..N {
            let s = f1[i] + f2[i];
            k[i] += s * WGK[j];
            if j % 2 == 1 {
                g[i] += s * WG[j / 2];
            }
        }
    }
    let mut diff = zero;
    for i in 0..N {
        k[i] *= h;
        g[i] *= h;
        diff[i] = k[i] - g[i];
    }
    let error = max_norm(&diff);
    if !error.is_finite() || !max_norm(&k).is_finite() {
        return Err(Error::Quadrature { estimate: error });
    }
    Ok(Piece { a, b, value: k, error })
}

/// Integral of `f` over `[points[0], points[last]]` with the interior points
/// used as initial breakpoints.
pub fn integrate_with_breaks<const N: usize, F>(
    mut f: F,
    points: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult<N>>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    if points.len() < 2 {
        return Err(Error::precondition("quadrature needs at least two points"));
    }
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&mut f, w[0], w[1])?);
            evals += 15;
        }
    }
    loop {
        let mut total = [Complex64::new(0.0, 0.0); N];
        let mut err = 0.0;
        for piece in heap.iter() {
            for i in 0..N {
                total[i] += piece.value[i];
            }
            err += piece.error;
        }
        if err <= opts.abs_tol.max(opts.rel_tol * max_norm(&total)) {
            return Ok(QuadResult {
                value: total,
                error: err,
                evals,
            });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature { estimate: err });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Ok(QuadResult {
                    value: total,
                    error: 0.0,
                    evals,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Quadrature { estimate: err });
        }
        heap.push(kronrod(&mut f, worst.a, mid)?);
        heap.push(kronrod(&mut f, mid, worst.b)?);
        evals += 30;
    }
}

pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult<N>>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    integrate_with_breaks(f, &[a, b], opts)
}

/// Real scalar convenience wrapper; returns `(value, error)`.
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let r = integrate(|x| Ok([Complex64::new(f(x), 0.0)]), a, b, opts)?;
    Ok((r.value[0].re, r.error))
}

/// An integral over the whole real line with an extrapolated tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineIntegral {
    pub value: Complex64,
    /// Contribution assigned to `|t| > window`, already included in `value`.
    pub tail: f64,
    pub error: f64,
    pub window: f64,
}

/// `int f` over the real line for integrands decaying like `t^-2`.
///
/// `breaks` seeds the core window (its extent sets the initial half-width);
/// annuli `T < |t| < 2T` are added until one contributes at most `rel_tol` of
/// the total. Beyond `T` a `t^-2` integrand carries exactly the mass of the
/// last annulus, which is added as the tail.
pub fn integrate_line<F>(mut f: F, breaks: &[f64], rel_tol: f64, max_window: f64, opts: QuadOptions) -> Result<LineIntegral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut g = |t: f64| f(t).map(|v| [v]);
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    let half = pts.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    pts.extend([-half, half]);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let core = integrate_with_breaks(&mut g, &pts, opts)?;
    let mut value = core.value[0];
    let mut error = core.error;
    let mut t = half;
    loop {
        let left = integrate_with_breaks(&mut g, &[-2.0 * t, -t], opts)?;
        let right = integrate_with_breaks(&mut g, &[t, 2.0 * t], opts)?;
        let annulus = left.value[0] + right.value[0];
        value += annulus;
        error += left.error + right.error;
        t *= 2.0;
        let tail = annulus.norm();
        if tail <= rel_tol * value.norm() || value.norm() == 0.0 || t >= max_window {
            if tail > 1e-2 * value.norm() {
                return Err(Error::Quadrature { estimate: tail });
            }
            return Ok(LineIntegral {
                value: value + annulus,
                tail,
                error,
                window: t,
            });
        }
    }
}
