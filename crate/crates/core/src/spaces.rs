//! Entire pairs `E = A - iB`, their reproducing kernels, sampled
//! Hermite-Biehler and positivity checks, the rescaling action
//! `[a (.)_p F](z) = a^p F(az)`, and weighted `L^2` norms on the real line.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::canonical::GridSpec;
use crate::closedform::ClosedFormParams;
use crate::error::{Error, Result};
use crate::quad::{integrate_line, LineIntegral, QuadOptions};
use crate::recurrence::{solve_for_radius, CoeffSeq, ParamPair};
use crate::specfun::Tolerance;

/// Below this distance between `z` and `conj(w)` the kernel uses its
/// derivative form.
pub const CONFLUENT_RADIUS: f64 = 1e-6;
/// Largest point set accepted by the Gram routines.
pub const MAX_GRAM_POINTS: usize = 64;

const CAUCHY_NODES: usize = 16;
const CAUCHY_RADIUS: f64 = 0.05;

/// Anything that evaluates a pair `(A(z), B(z))` of entire functions.
pub trait PairFn: Sync {
    fn ab(&self, z: Complex64) -> Result<(Complex64, Complex64)>;

    /// `(A'(z), B'(z))`; by default a Cauchy average on a small circle.
    fn derivs(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let mut da = Complex64::new(0.0, 0.0);
        let mut db = Complex64::new(0.0, 0.0);
        for k in 0..CAUCHY_NODES {
            let u = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / CAUCHY_NODES as f64);
            let (a, b) = self.ab(z + CAUCHY_RADIUS * u)?;
            da += a / u;
            db += b / u;
        }
        let s = 1.0 / (CAUCHY_NODES as f64 * CAUCHY_RADIUS);
        Ok((da * s, db * s))
    }

    /// `E(z) = A(z) - i B(z)`.
    fn e(&self, z: Complex64) -> Result<Complex64> {
        let (a, b) = self.ab(z)?;
        Ok(a - Complex64::i() * b)
    }
}

impl<T: PairFn + ?Sized> PairFn for &T {
    fn ab(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        (**self).ab(z)
    }
    fn derivs(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        (**self).derivs(z)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    Series(CoeffSeq),
    Closed(ClosedFormParams),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BackendChoice {
    /// Recurrence coefficients sized for `|z| <= radius`.
    Series { radius: f64 },
    Closed,
}

/// The pair attached to a parameter, with its evaluation backend.
#[derive(Clone, Debug, PartialEq)]
pub struct EntirePair {
    pub backend: Backend,
    pub order_p: f64,
    pub params: ParamPair,
    pub tol: Tolerance,
}

impl EntirePair {
    /// `A(z)` and `B(z)/z`.
    pub fn b_over_z(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        match &self.backend {
            Backend::Closed(cf) => cf.eval_parts(z, self.tol),
            Backend::Series(seq) => {
                let v = seq.eval_b_over_z(z);
                self.check_tail(v.tail, v.a, v.b)?;
                Ok((v.a, v.b))
            }
        }
    }

    fn check_tail(&self, tail: f64, a: Complex64, b: Complex64) -> Result<()> {
        let allowed = 1e-12 * (1.0 + a.norm() + b.norm());
        if tail > allowed {
            return Err(Error::ToleranceExceeded {
                what: "series tail",
                bound: tail,
                tol: allowed,
            });
        }
        Ok(())
    }
}

impl PairFn for EntirePair {
    fn ab(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        match &self.backend {
            Backend::Closed(cf) => cf.eval(z, self.tol),
            Backend::Series(seq) => {
                let v = seq.eval(z);
                self.check_tail(v.tail, v.a, v.b)?;
                Ok((v.a, v.b))
            }
        }
    }

    fn derivs(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        match &self.backend {
            Backend::Series(seq) => Ok(seq.eval_derivs(z)),
            Backend::Closed(_) => {
                let mut da = Complex64::new(0.0, 0.0);
                let mut db = Complex64::new(0.0, 0.0);
                for k in 0..CAUCHY_NODES {
                    let u = Complex64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * k as f64 / CAUCHY_NODES as f64,
                    );
                    let (a, b) = self.ab(z + CAUCHY_RADIUS * u)?;
                    da += a / u;
                    db += b / u;
                }
                let s = 1.0 / (CAUCHY_NODES as f64 * CAUCHY_RADIUS);
                Ok((da * s, db * s))
            }
        }
    }
}

/// The pair generated by `(p, P, psi)`.
pub fn xi_hat(params: &ParamPair, choice: BackendChoice) -> Result<EntirePair> {
    let backend = match choice {
        BackendChoice::Closed => Backend::Closed(ClosedFormParams::new(params)?),
        BackendChoice::Series { radius } => {
            Backend::Series(solve_for_radius(params, radius + CAUCHY_RADIUS, 1e-17)?)
        }
    };
    Ok(EntirePair {
        backend,
        order_p: params.p,
        params: *params,
        tol: Tolerance::default(),
    })
}

/// `z -> a^p (A(az), B(az))`.
#[derive(Clone, Copy, Debug)]
pub struct Rescaled<P> {
    pub inner: P,
    pub a: f64,
    pub p: f64,
}

impl<P: PairFn> PairFn for Rescaled<P> {
    fn ab(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let s = self.a.powf(self.p);
        let (a, b) = self.inner.ab(self.a * z)?;
        Ok((s * a, s * b))
    }

    fn derivs(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let s = self.a.powf(self.p) * self.a;
        let (a, b) = self.inner.derivs(self.a * z)?;
        Ok((s * a, s * b))
    }
}

pub fn rescale<P: PairFn>(pair: P, a: f64, p: f64) -> Result<Rescaled<P>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::precondition(format!("rescaling needs a > 0, got {a}")));
    }
    Ok(Rescaled { inner: pair, a, p })
}

/// The same action on a single function.
pub fn rescale_fn<F>(f: F, a: f64, p: f64) -> impl Fn(Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let s = a.powf(p);
    move |z| s * f(a * z)
}

/// `K(z, w) = (B(z) A(conj w) - B(conj w) A(z)) / (z - conj w)`.
pub fn kernel<P: PairFn + ?Sized>(pair: &P, z: Complex64, w: Complex64) -> Result<Complex64> {
    let wb = w.conj();
    let d = z - wb;
    if d.norm() < CONFLUENT_RADIUS {
        return confluent(pair, 0.5 * (z + wb));
    }
    let (az, bz) = pair.ab(z)?;
    let (aw, bw) = pair.ab(wb)?;
    Ok((bz * aw - bw * az) / d)
}

fn confluent<P: PairFn + ?Sized>(pair: &P, m: Complex64) -> Result<Complex64> {
    let (a, b) = pair.ab(m)?;
    let (da, db) = pair.derivs(m)?;
    Ok(db * a - da * b)
}

/// `|K_{a (.)_p E}(z, w) - a^{2p+1} K_E(az, aw)|`.
pub fn kernel_rescale_residual<P: PairFn>(pair: &P, a: f64, p: f64, z: Complex64, w: Complex64) -> Result<f64> {
    let scaled = rescale(pair, a, p)?;
    let lhs = kernel(&scaled, z, w)?;
    let rhs = a.powf(2.0 * p + 1.0) * kernel(pair, a * z, a * w)?;
    Ok((lhs - rhs).norm())
}

/// A finite set of pairwise distinct complex points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet(Vec<Complex64>);

impl PointSet {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        for (i, x) in points.iter().enumerate() {
            if !x.re.is_finite() || !x.im.is_finite() {
                return Err(Error::precondition("points must be finite"));
            }
            for y in &points[..i] {
                if (x - y).norm() < 1e-12 {
                    return Err(Error::precondition(format!("repeated point {x}")));
                }
            }
        }
        Ok(PointSet(points))
    }

    pub fn points(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sampled Hermite-Biehler certificate: `|E(conj z)| < |E(z)|` on `grid`
/// (upper half-plane) and `E != 0` on `real_grid`.
pub fn hb_check<P: PairFn + ?Sized>(pair: &P, grid: &PointSet, real_grid: &PointSet) -> Result<bool> {
    if grid.is_empty() || real_grid.is_empty() {
        return Err(Error::precondition("hb_check needs nonempty grids"));
    }
    for &z in grid.points() {
        if z.im <= 0.0 {
            return Err(Error::precondition(format!("{z} is not in the upper half-plane")));
        }
        if pair.e(z.conj())?.norm() >= pair.e(z)?.norm() {
            return Ok(false);
        }
    }
    for &x in real_grid.points() {
        if pair.e(Complex64::new(x.re, 0.0))?.norm() <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hermitian Gram matrix `[K(z_i, z_j)]`.
pub fn gram_matrix<P: PairFn + ?Sized>(pair: &P, points: &PointSet) -> Result<DMatrix<Complex64>> {
    let pts = points.points();
    let n = pts.len();
    if n > MAX_GRAM_POINTS {
        return Err(Error::precondition(format!(
            "at most {MAX_GRAM_POINTS} points, got {n}"
        )));
    }
    let at: Vec<_> = pts.iter().map(|&z| pair.ab(z)).collect::<Result<_>>()?;
    let atc: Vec<_> = pts.iter().map(|&z| pair.ab(z.conj())).collect::<Result<_>>()?;
    let mut k = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            let d = pts[i] - pts[j].conj();
            k[(i, j)] = if d.norm() < CONFLUENT_RADIUS {
                confluent(pair, 0.5 * (pts[i] + pts[j].conj()))?
            } else {
                let (az, bz) = at[i];
                let (aw, bw) = atc[j];
                (bz * aw - bw * az) / d
            };
        }
    }
    let kh = k.adjoint();
    Ok((k + kh).scale(0.5))
}

/// Smallest eigenvalue and trace of a Gram-type matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramSummary {
    pub min_eig: f64,
    pub trace: f64,
}

fn summarize(m: &DMatrix<Complex64>, trace: f64) -> GramSummary {
    let eig = m.clone().symmetric_eigenvalues();
    let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    GramSummary { min_eig, trace }
}

fn trace_of(m: &DMatrix<Complex64>) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

pub fn gram_spectrum<P: PairFn + ?Sized>(pair: &P, points: &PointSet) -> Result<GramSummary> {
    let g = gram_matrix(pair, points)?;
    let t = trace_of(&g);
    Ok(summarize(&g, t))
}

/// Smallest eigenvalue of `[K(z_i, z_j)]`.
pub fn gram_min_eig<P: PairFn + ?Sized>(pair: &P, points: &PointSet) -> Result<f64> {
    Ok(gram_spectrum(pair, points)?.min_eig)
}

/// Smallest eigenvalue of `[K(z_i, z_j) - a^{2p+1} K(a z_i, a z_j)]`, with the
/// trace of `[K(z_i, z_j)]` for scale.
pub fn homogeneity_defect<P: PairFn + ?Sized>(pair: &P, p: f64, a: f64, points: &PointSet) -> Result<GramSummary> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::precondition(format!("homogeneity scale must lie in (0, 1], got {a}")));
    }
    let g = gram_matrix(pair, points)?;
    let scaled = PointSet(points.points().iter().map(|&z| a * z).collect());
    let h = gram_matrix(pair, &scaled)?;
    let diff = &g - h.scale(a.powf(2.0 * p + 1.0));
    Ok(summarize(&diff, trace_of(&g)))
}

const MAX_WINDOW: f64 = 8192.0;

/// `int F(t) conj(G(t)) / |E(t)|^2 dt` over the real line.
///
/// The window grows until the outermost annulus contributes less than
/// `quad.quad_tol` of the total; the integrand is assumed to decay like `t^-2`.
pub fn inner_via_weight<P, F, G>(f: F, g: G, pair: &P, quad: &GridSpec) -> Result<LineIntegral>
where
    P: PairFn + ?Sized,
    F: Fn(f64) -> Result<Complex64>,
    G: Fn(f64) -> Result<Complex64>,
{
    let integrand = |t: f64| -> Result<Complex64> {
        let e = pair.e(Complex64::new(t, 0.0))?;
        Ok(f(t)? * g(t)?.conj() / e.norm_sqr())
    };
    let opts = QuadOptions {
        abs_tol: quad.quad_tol * 1e-3,
        rel_tol: quad.quad_tol * 1e-2,
        max_intervals: 20_000,
    };
    let mut breaks: Vec<f64> = quad.points.iter().flat_map(|&x| [-x, x]).collect();
    breaks.extend([-8.0, 0.0, 8.0]);
    integrate_line(integrand, &breaks, quad.quad_tol, MAX_WINDOW, opts)
}

/// `||F||^2 = int |F(t)/E(t)|^2 dt`.
pub fn norm_via_weight<P, F>(f: F, pair: &P, quad: &GridSpec) -> Result<LineIntegral>
where
    P: PairFn + ?Sized,
    F: Fn(f64) -> Result<Complex64>,
{
    let f = &f;
    inner_via_weight(f, f, pair, quad)
}
