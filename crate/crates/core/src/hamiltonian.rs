//! The Hamiltonians `H(a) = D(a) P D(a)^T` on `(0, inf)`, their kernels and
//! integrability, the admissible parameter class, and the two equivalence
//! relations on parameters with their representatives.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::recurrence::ParamPair;

/// A real 2x2 matrix `(m11 m12; m21 m22)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);
    /// The symplectic unit `J = (0 -1; 1 0)`.
    pub const J: Matrix2 = Matrix2::new(0.0, -1.0, 1.0, 0.0);

    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Matrix2 { m11, m12, m21, m22 }
    }

    pub fn transpose(&self) -> Matrix2 {
        Matrix2::new(self.m11, self.m21, self.m12, self.m22)
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn inverse(&self) -> Option<Matrix2> {
        let d = self.det();
        (d != 0.0).then(|| Matrix2::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.m11.abs().max(self.m12.abs()).max(self.m21.abs()).max(self.m22.abs())
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn sym_eigenvalues(&self) -> [f64; 2] {
        let off = 0.5 * (self.m12 + self.m21);
        let mean = 0.5 * (self.m11 + self.m22);
        let half = 0.5 * (self.m11 - self.m22);
        let r = half.hypot(off);
        [mean - r, mean + r]
    }

    /// Unit eigenvector of the symmetric part for its smaller eigenvalue.
    fn sym_low_eigenvector(&self) -> [f64; 2] {
        let off = 0.5 * (self.m12 + self.m21);
        let [lo, _] = self.sym_eigenvalues();
        // (A - lo I) v = 0; pick the better-conditioned row.
        let r1 = [self.m11 - lo, off];
        let r2 = [off, self.m22 - lo];
        let row = if r1[0].hypot(r1[1]) >= r2[0].hypot(r2[1]) { r1 } else { r2 };
        let v = if row[0] == 0.0 && row[1] == 0.0 {
            [1.0, 0.0]
        } else {
            [-row[1], row[0]]
        };
        normalize(v)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    let s = if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) { -n } else { n };
    [v[0] / s, v[1] / s]
}

/// Membership of a parameter in the admissible class, or the first reason
/// it fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    InPP,
    NotPSD,
    KernelContainsE1,
    KernelContainsPsiVec,
    ZeroPsiSingular,
    /// `p <= -1/2`: the class is only defined for `p > -1/2`.
    OrderOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    Infinity,
}

const ZERO_TOL: f64 = 1e-12;
const EQUIV_TOL: f64 = 1e-10;

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::precondition(format!("expected a > 0, got {a}")))
    }
}

/// `D(a) = (a^p 0; psi sinh(p log a)/p a^{-p})`, with `psi log a` below the
/// diagonal when `p = 0`.
pub fn d_psi(p: f64, psi: f64, a: f64) -> Result<Matrix2> {
    check_a(a)?;
    let l = a.ln();
    let low = if p == 0.0 { psi * l } else { psi * (p * l).sinh() / p };
    Ok(Matrix2::new((p * l).exp(), 0.0, low, (-p * l).exp()))
}

/// `H(a) = D(a) P D(a)^T`.
pub fn h_of(params: &ParamPair, a: f64) -> Result<Matrix2> {
    let d = d_psi(params.p, params.psi, a)?;
    let h = d * params.matrix() * d.transpose();
    let off = 0.5 * (h.m12 + h.m21);
    Ok(Matrix2::new(h.m11, off, off, h.m22))
}

fn in_kernel(pm: &Matrix2, v: [f64; 2]) -> bool {
    let pv = pm.apply(v);
    pv[0].hypot(pv[1]) <= ZERO_TOL * params_norm(pm) * v[0].hypot(v[1])
}

fn params_norm(pm: &Matrix2) -> f64 {
    let [lo, hi] = pm.sym_eigenvalues();
    lo.abs().max(hi.abs())
}

fn is_singular(x: &ParamPair) -> bool {
    let n = x.norm();
    x.det().abs() <= ZERO_TOL * n * n
}

/// How the kernel of `H(a)` moves with `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// `P` is invertible; `H(a)` has trivial kernel.
    Trivial,
    /// Kernel spanned by `(1, 0)` for every `a`.
    FixedE1,
    /// Kernel spanned by `(-psi, 2p)` for every `a`.
    FixedPsiVec,
    /// Rank one with a kernel direction that depends on `a`.
    Moving,
}

pub fn kernel_kind(params: &ParamPair) -> Result<KernelKind> {
    let pm = params.matrix();
    if pm.max_abs() == 0.0 {
        return Err(Error::precondition("P = 0: every direction is in the kernel"));
    }
    if !is_singular(params) {
        return Ok(KernelKind::Trivial);
    }
    if in_kernel(&pm, [1.0, 0.0]) {
        return Ok(KernelKind::FixedE1);
    }
    let v = [-params.psi, 2.0 * params.p];
    if (v[0] != 0.0 || v[1] != 0.0) && in_kernel(&pm, v) {
        return Ok(KernelKind::FixedPsiVec);
    }
    Ok(KernelKind::Moving)
}

/// Unit vector spanning `ker H(a) = D(a)^{-T} ker P`, or `None` when `P` is
/// invertible.
pub fn kernel_direction(params: &ParamPair, a: f64) -> Result<Option<[f64; 2]>> {
    check_a(a)?;
    if kernel_kind(params)? == KernelKind::Trivial {
        return Ok(None);
    }
    let xi = params.matrix().sym_low_eigenvector();
    let d = d_psi(params.p, params.psi, a)?;
    let dit = d.transpose().inverse().expect("D(a) is unimodular");
    Ok(Some(normalize(dit.apply(xi))))
}

// Coefficients of H(a) = L diag-conjugate form: a^{2p} q11, q12, a^{-2p} q22.
fn q_coefficients(x: &ParamPair) -> (bool, bool, bool) {
    let pm = x.matrix();
    let n = x.norm();
    let v = [-x.psi, 2.0 * x.p];
    let pv = pm.apply(v);
    let vn = v[0].hypot(v[1]);
    let q11 = x.kappa1.abs() <= ZERO_TOL * n;
    let q12 = pv[0].abs() <= ZERO_TOL * n * vn;
    let q22 = (v[0] * pv[0] + v[1] * pv[1]).abs() <= ZERO_TOL * n * vn * vn;
    (q11, q12, q22)
}

/// Whether `H` is integrable at the given endpoint of `(0, inf)`.
pub fn integrable_at(params: &ParamPair, endpoint: Endpoint) -> bool {
    let p = params.p;
    if p == 0.0 {
        return match endpoint {
            Endpoint::Zero => true,
            Endpoint::Infinity => params.matrix().max_abs() == 0.0,
        };
    }
    let (q11, q12, q22) = q_coefficients(params);
    match endpoint {
        Endpoint::Zero => (p > -0.5 || q11) && (p < 0.5 || q22),
        Endpoint::Infinity => q12 && (p < -0.5 || q11) && (p > 0.5 || q22),
    }
}

fn is_psd(x: &ParamPair) -> bool {
    let pm = x.matrix();
    let [lo, _] = pm.sym_eigenvalues();
    let tr = pm.trace();
    if tr < 0.0 {
        return false;
    }
    lo >= -ZERO_TOL * tr
}

/// Classify `(p, P, psi)` against the admissible class.
pub fn in_class_pp(params: &ParamPair) -> ClassTag {
    if params.p <= -0.5 {
        return ClassTag::OrderOutOfRange;
    }
    if !is_psd(params) {
        return ClassTag::NotPSD;
    }
    let pm = params.matrix();
    if params.p == 0.0 && params.psi == 0.0 {
        return if is_singular(params) || pm.max_abs() == 0.0 {
            ClassTag::ZeroPsiSingular
        } else {
            ClassTag::InPP
        };
    }
    if pm.max_abs() == 0.0 || in_kernel(&pm, [1.0, 0.0]) {
        return ClassTag::KernelContainsE1;
    }
    if params.p != 0.0 && in_kernel(&pm, [-params.psi, 2.0 * params.p]) {
        return ClassTag::KernelContainsPsiVec;
    }
    ClassTag::InPP
}

fn require_class(x: &ParamPair) -> Result<()> {
    match in_class_pp(x) {
        ClassTag::InPP => Ok(()),
        t => Err(Error::NotInClass(t)),
    }
}

fn require_pair(x: &ParamPair, y: &ParamPair) -> Result<()> {
    if x.p != y.p {
        return Err(Error::OrderMismatch {
            left: x.p,
            right: y.p,
        });
    }
    require_class(x)?;
    require_class(y)
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= EQUIV_TOL * scale
}

/// Equality of the generated spaces: same `k1`, same `det P`, and
/// `k1 (psi - psi') = 2p (k3 - k3')`.
pub fn approx_equiv(x: &ParamPair, y: &ParamPair) -> Result<bool> {
    require_pair(x, y)?;
    let s = x.scale().max(y.scale());
    let shear = x.kappa1 * (x.psi - y.psi) - 2.0 * x.p * (x.kappa3 - y.kappa3);
    Ok(close(x.kappa1, y.kappa1, s) && close(x.det(), y.det(), s * s) && close(shear, 0.0, s * s))
}

/// Representative with `k3 = 0`: `diag(k1, k2 - k3^2/k1)`, `psi - 2p k3/k1`.
pub fn canonicalize_approx(params: &ParamPair) -> Result<ParamPair> {
    require_class(params)?;
    let ParamPair {
        p,
        kappa1: k1,
        kappa2: k2,
        kappa3: k3,
        psi,
    } = *params;
    if k3 == 0.0 {
        return Ok(*params);
    }
    Ok(ParamPair {
        p,
        kappa1: k1,
        kappa2: k2 - k3 * k3 / k1,
        kappa3: 0.0,
        psi: psi - 2.0 * p * k3 / k1,
    })
}

/// Representative with `psi = 0` (only for `p != 0`).
pub fn canonicalize_approx_psi_zero(params: &ParamPair) -> Result<ParamPair> {
    require_class(params)?;
    if params.p == 0.0 {
        return Err(Error::precondition("psi-free representatives need p != 0"));
    }
    let k1 = params.kappa1;
    let k3 = params.kappa3 - k1 * params.psi / (2.0 * params.p);
    Ok(ParamPair {
        p: params.p,
        kappa1: k1,
        kappa2: (params.det() + k3 * k3) / k1,
        kappa3: k3,
        psi: 0.0,
    })
}

/// `(diag(c^{1/2+p}, c^{1/2-p}) P diag(...), c^{-2p} psi)`.
pub fn rescale_params(params: &ParamPair, c: f64) -> Result<ParamPair> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::precondition(format!("rescaling needs c > 0, got {c}")));
    }
    let p = params.p;
    let l = c.ln();
    Ok(ParamPair {
        p,
        kappa1: ((1.0 + 2.0 * p) * l).exp() * params.kappa1,
        kappa3: c * params.kappa3,
        kappa2: ((1.0 - 2.0 * p) * l).exp() * params.kappa2,
        psi: (-2.0 * p * l).exp() * params.psi,
    })
}

/// The two rescaling invariants `(k1^{-2r} det P, k1^{2pr} psi - 2p k1^{-r} k3)`
/// with `r = 1/(1+2p)`; requires `k1 > 0`.
pub fn simeq_invariants(params: &ParamPair) -> (f64, f64) {
    let p = params.p;
    let r = 1.0 / (1.0 + 2.0 * p);
    let lk = params.kappa1.ln();
    let i1 = (-2.0 * r * lk).exp() * params.det();
    let i2 = (2.0 * p * r * lk).exp() * params.psi - 2.0 * p * (-r * lk).exp() * params.kappa3;
    (i1, i2)
}

fn close_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQUIV_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Equality of the generated chains up to rescaling.
pub fn simeq_equiv(x: &ParamPair, y: &ParamPair) -> Result<bool> {
    require_pair(x, y)?;
    let (a1, a2) = simeq_invariants(x);
    let (b1, b2) = simeq_invariants(y);
    Ok(close_rel(a1, b1) && close_rel(a2, b2))
}

/// Representative with `k1 = 1`, `k3 = 0`.
pub fn canonicalize_simeq(params: &ParamPair) -> Result<ParamPair> {
    require_class(params)?;
    let (i1, i2) = simeq_invariants(params);
    if params.kappa1 == 1.0 && params.kappa3 == 0.0 {
        return Ok(*params);
    }
    Ok(ParamPair {
        p: params.p,
        kappa1: 1.0,
        kappa3: 0.0,
        kappa2: i1,
        psi: i2,
    })
}
