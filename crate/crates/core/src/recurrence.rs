//! Power-series coefficients of `(A, B)` from the defining recurrence
//!
//! `(a_{n+1}, b_{n+1}) = (a_n, b_n) * (-1/((n+1)(2p+n+1))) P J (2p+n+1, 0; psi, n+1)`
//!
//! with `(a_0, b_0) = (1, 0)`, plus parameter recovery from the first
//! coefficients, the shear transform and the symmetry criterion.

use num_complex::Complex64;

use crate::dd::{Dd, DdComplex};
use crate::error::{Error, Result};
use crate::hamiltonian::Matrix2;

/// Hard cap on the number of coefficients picked automatically.
pub const MAX_AUTO_TERMS: usize = 4096;

const POLE_RADIUS: f64 = 1e-8;

/// The master parameter `(p, P, psi)` with `P = (k1 k3; k3 k2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPair {
    pub p: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub psi: f64,
}

/// Rejects `p` within the exclusion radius of `{-1/2, -1, -3/2, ...}`.
pub fn check_order(p: f64) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::precondition("order p must be finite"));
    }
    let x = 2.0 * p + 1.0;
    if x < 0.5 && (x - x.round()).abs() < POLE_RADIUS {
        return Err(Error::Pole {
            what: "order p",
            value: p,
        });
    }
    Ok(())
}

impl ParamPair {
    /// Entries in the order `(k1, k3, k2)`, as on the command line.
    pub fn new(p: f64, kappa1: f64, kappa3: f64, kappa2: f64, psi: f64) -> Result<Self> {
        check_order(p)?;
        if ![kappa1, kappa2, kappa3, psi].iter().all(|v| v.is_finite()) {
            return Err(Error::precondition("matrix entries and psi must be finite"));
        }
        Ok(ParamPair {
            p,
            kappa1,
            kappa2,
            kappa3,
            psi,
        })
    }

    /// `p = 0, P = I, psi = 0`, for which `E(z) = e^{-iz}`.
    pub fn paley_wiener() -> Self {
        ParamPair {
            p: 0.0,
            kappa1: 1.0,
            kappa2: 1.0,
            kappa3: 0.0,
            psi: 0.0,
        }
    }

    pub fn matrix(&self) -> Matrix2 {
        Matrix2::new(self.kappa1, self.kappa3, self.kappa3, self.kappa2)
    }

    pub fn det(&self) -> f64 {
        self.kappa1 * self.kappa2 - self.kappa3 * self.kappa3
    }

    /// Spectral norm of `P`.
    pub fn norm(&self) -> f64 {
        self.matrix().sym_eigenvalues().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sigma = 2p k3 - psi k1`.
    pub fn sigma(&self) -> f64 {
        2.0 * self.p * self.kappa3 - self.psi * self.kappa1
    }

    /// Homogeneity order `nu = p - 1/2`.
    pub fn nu(&self) -> f64 {
        self.p - 0.5
    }

    /// Scale used for relative comparisons of parameters.
    pub fn scale(&self) -> f64 {
        self.norm() + self.psi.abs() + 1.0
    }
}

/// Truncated solution `(a_n, b_n)`, `n = 0..=N`, of the recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffSeq {
    pub pairs: Vec<(f64, f64)>,
    /// `C ||P||` with `C` the supremum constant; `|(a_n, b_n)| <= (C||P||)^n / n!`.
    pub bound_constant: f64,
    pub p: f64,
    lo: Vec<(f64, f64)>,
    norm_p: f64,
    psi: f64,
}

/// Series values with a certified bound on the truncation error of each.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub a: Complex64,
    pub b: Complex64,
    pub tail: f64,
}

fn norm_lower_triangular(x: f64, y: f64) -> f64 {
    // spectral norm of (1 0; x y)
    let s = 1.0 + x * x + y * y;
    let disc = (s * s - 4.0 * y * y).max(0.0).sqrt();
    ((s + disc) / 2.0).sqrt()
}

fn step_constant(p: f64, psi: f64, n: usize) -> f64 {
    let c = 2.0 * p + n as f64 + 1.0;
    norm_lower_triangular(psi / c, (n as f64 + 1.0) / c)
}

/// An upper bound for `sup_{k >= n} C_k`.
fn sup_constant_from(p: f64, psi: f64, n: usize) -> f64 {
    // Beyond m, |psi/c_k| decreases and (k+1)/c_k moves monotonically to 1.
    let first_positive = if 2.0 * p + 1.0 > 0.0 {
        0
    } else {
        (-(2.0 * p + 1.0)).floor() as usize + 1
    };
    let m = n.max(first_positive);
    let mut sup = (n..m).map(|k| step_constant(p, psi, k)).fold(0.0, f64::max);
    let c = 2.0 * p + m as f64 + 1.0;
    let y = ((m as f64 + 1.0) / c).max(1.0);
    sup = sup.max(norm_lower_triangular(psi.abs() / c, y));
    sup
}

// |v_n| r^n rho/(1-rho), formed in log space.
fn scaled_tail(vn: f64, r: f64, n: usize, rho: f64) -> f64 {
    if vn == 0.0 || r == 0.0 {
        return 0.0;
    }
    (vn.ln() + n as f64 * r.ln() + (rho / (1.0 - rho)).ln()).exp()
}

struct Stepper {
    p: f64,
    k1: Dd,
    k2: Dd,
    k3: Dd,
    psi: Dd,
    alpha: Dd,
    beta: Dd,
    n: usize,
}

impl Stepper {
    fn new(params: &ParamPair) -> Self {
        Stepper {
            p: params.p,
            k1: params.kappa1.into(),
            k2: params.kappa2.into(),
            k3: params.kappa3.into(),
            psi: params.psi.into(),
            alpha: Dd::ONE,
            beta: Dd::ZERO,
            n: 0,
        }
    }

    fn step(&mut self) {
        let c = Dd::from(2.0 * self.p) + Dd::from(self.n as f64 + 1.0);
        let beta = (self.alpha * self.k1 + self.beta * self.k3) / c;
        let alpha = (self.psi * beta - (self.alpha * self.k3 + self.beta * self.k2))
            / Dd::from(self.n as f64 + 1.0);
        self.alpha = alpha;
        self.beta = beta;
        self.n += 1;
    }
}

impl CoeffSeq {
    fn from_steps(params: &ParamPair, mut stop: impl FnMut(&Stepper) -> bool) -> Self {
        let mut st = Stepper::new(params);
        let mut pairs = vec![(1.0, 0.0)];
        let mut lo = vec![(0.0, 0.0)];
        while !stop(&st) {
            st.step();
            pairs.push((st.alpha.hi, st.beta.hi));
            lo.push((st.alpha.lo, st.beta.lo));
        }
        let n = pairs.len() - 1;
        let norm_p = params.norm();
        let c = sup_constant_from(params.p, params.psi, 0).max(
            (0..=n)
                .map(|k| step_constant(params.p, params.psi, k))
                .fold(0.0, f64::max),
        );
        CoeffSeq {
            pairs,
            bound_constant: c * norm_p,
            p: params.p,
            lo,
            norm_p,
            psi: params.psi,
        }
    }

    /// Index of the last stored coefficient.
    pub fn order(&self) -> usize {
        self.pairs.len() - 1
    }

    /// The supremum constant `C` alone.
    pub fn sup_constant(&self) -> f64 {
        if self.norm_p == 0.0 {
            sup_constant_from(self.p, self.psi, 0)
        } else {
            self.bound_constant / self.norm_p
        }
    }

    fn dd_pair(&self, n: usize) -> (Dd, Dd) {
        let (a, b) = self.pairs[n];
        let (al, bl) = self.lo[n];
        (Dd::new(a, al), Dd::new(b, bl))
    }

    /// Bound on `sum_{n>N} |(a_n, b_n)| r^n` from the per-step estimate
    /// `|v_{n+1}| <= |v_n| C_n ||P|| / (n+1)`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let n = self.order();
        let (a, b) = self.pairs[n];
        let vn = a.hypot(b);
        if vn == 0.0 || r == 0.0 {
            return 0.0;
        }
        let rho = sup_constant_from(self.p, self.psi, n) * self.norm_p * r / (n as f64 + 1.0);
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        scaled_tail(vn, r, n, rho)
    }

    /// The cruder bound `sum_{n>N} (C||P|| r)^n / n!`.
    pub fn coarse_tail_bound(&self, r: f64) -> f64 {
        let x = self.bound_constant * r;
        if x == 0.0 {
            return 0.0;
        }
        let n = self.order();
        let mut ln_t = 0.0;
        for k in 1..=n + 1 {
            ln_t += x.ln() - (k as f64).ln();
        }
        let mut t = ln_t.exp();
        let mut sum = 0.0;
        let mut k = n + 1;
        loop {
            sum += t;
            let ratio = x / (k as f64 + 1.0);
            if ratio < 0.5 {
                return sum + t * ratio / (1.0 - ratio);
            }
            t *= ratio;
            k += 1;
            if !sum.is_finite() {
                return f64::INFINITY;
            }
        }
    }

    /// Partial sums `A(z) = sum a_n z^n`, `B(z) = sum b_n z^n` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> SeriesValue {
        let zd = DdComplex::from(z);
        let mut a = DdComplex::ZERO;
        let mut b = DdComplex::ZERO;
        for n in (0..=self.order()).rev() {
            let (an, bn) = self.dd_pair(n);
            a = a * zd + DdComplex::from_real(an);
            b = b * zd + DdComplex::from_real(bn);
        }
        SeriesValue {
            a: a.to_c64(),
            b: b.to_c64(),
            tail: self.tail_bound(z.norm()),
        }
    }

    /// `A(z)` and `B(z)/z = sum b_{n+1} z^n`, with the tail bound of the latter.
    pub fn eval_b_over_z(&self, z: Complex64) -> SeriesValue {
        let zd = DdComplex::from(z);
        let mut a = DdComplex::ZERO;
        let mut bz = DdComplex::ZERO;
        for n in (0..=self.order()).rev() {
            let (an, bn) = self.dd_pair(n);
            a = a * zd + DdComplex::from_real(an);
            if n >= 1 {
                bz = bz * zd + DdComplex::from_real(bn);
            }
        }
        let r = z.norm();
        let tail = if r > 0.0 {
            self.tail_bound(r) / r
        } else {
            let n = self.order();
            let (an, bn) = self.pairs[n];
            if n == 1 && an.hypot(bn) > 0.0 {
                sup_constant_from(self.p, self.psi, 1) * self.norm_p / 2.0 * an.hypot(bn)
            } else {
                0.0
            }
        };
        SeriesValue {
            a: a.to_c64(),
            b: bz.to_c64(),
            tail: self.tail_bound(r).max(tail),
        }
    }

    /// Derivatives `(A'(z), B'(z))` of the partial sums.
    pub fn eval_derivs(&self, z: Complex64) -> (Complex64, Complex64) {
        let zd = DdComplex::from(z);
        let mut a = DdComplex::ZERO;
        let mut b = DdComplex::ZERO;
        for n in (1..=self.order()).rev() {
            let (an, bn) = self.dd_pair(n);
            let k = Dd::from(n as f64);
            a = a * zd + DdComplex::from_real(an * k);
            b = b * zd + DdComplex::from_real(bn * k);
        }
        (a.to_c64(), b.to_c64())
    }

    /// Like [`CoeffSeq::eval`], failing when the tail exceeds `tol`.
    pub fn eval_checked(&self, z: Complex64, tol: f64) -> Result<SeriesValue> {
        let v = self.eval(z);
        if v.tail > tol {
            return Err(Error::ToleranceExceeded {
                what: "series tail",
                bound: v.tail,
                tol,
            });
        }
        Ok(v)
    }
}

/// Coefficients `(a_n, b_n)` for `n = 0..=n_max`.
pub fn solve_recurrence(params: &ParamPair, n_max: usize) -> Result<CoeffSeq> {
    check_order(params.p)?;
    if n_max == 0 {
        return Err(Error::precondition("at least one recurrence step is required"));
    }
    Ok(CoeffSeq::from_steps(params, |st| st.n >= n_max))
}

/// Coefficients with `N` chosen so that the tail on `|z| <= radius` is below
/// `abs_tol`, capped at [`MAX_AUTO_TERMS`].
pub fn solve_for_radius(params: &ParamPair, radius: f64, abs_tol: f64) -> Result<CoeffSeq> {
    check_order(params.p)?;
    let norm_p = params.norm();
    let r = radius.abs();
    Ok(CoeffSeq::from_steps(params, |st| {
        if st.n >= MAX_AUTO_TERMS {
            return true;
        }
        if st.n < 2 {
            return false;
        }
        let vn = st.alpha.hi.hypot(st.beta.hi);
        if vn == 0.0 {
            return true;
        }
        let rho = sup_constant_from(st.p, params.psi, st.n) * norm_p * r / (st.n as f64 + 1.0);
        rho < 0.5 && scaled_tail(vn, r, st.n, rho) <= abs_tol
    }))
}

/// Reads `(p, P, psi)` back off `(a_1, b_1, a_2, b_2)`.
pub fn recover_params(coeffs: &CoeffSeq, p: f64) -> Result<ParamPair> {
    check_order(p)?;
    if coeffs.order() < 2 {
        return Err(Error::precondition("recovery needs coefficients up to n = 2"));
    }
    let (a1, b1) = coeffs.dd_pair(1);
    let (a2, b2) = coeffs.dd_pair(2);
    if b1.hi == 0.0 {
        return Err(Error::precondition(
            "b_1 = 0: B vanishes identically and P cannot be recovered",
        ));
    }
    let one_2p = Dd::from(1.0) + Dd::from(2.0 * p);
    let two_2p = Dd::from(2.0) + Dd::from(2.0 * p);
    let k1 = b1 * one_2p;
    let k3 = b2 / b1 * two_2p - a1 * one_2p;
    let psi = (a1 + k3) / b1;
    let k2 = (psi * b2 - a1 * k3 - a2 * 2.0) / b1;
    ParamPair::new(p, k1.to_f64(), k3.to_f64(), k2.to_f64(), psi.to_f64())
}

/// The shear `P -> (1 0; g 1) P (1 g; 0 1)`, `psi -> psi + 2p g`, under which
/// `(A, B) = (A' + g B', B')`.
pub fn gamma_shift(params: &ParamPair, g: f64) -> ParamPair {
    let ParamPair {
        p,
        kappa1: k1,
        kappa2: k2,
        kappa3: k3,
        psi,
    } = *params;
    ParamPair {
        p,
        kappa1: k1,
        kappa3: k3 + g * k1,
        kappa2: k2 + 2.0 * g * k3 + g * g * k1,
        psi: psi + 2.0 * p * g,
    }
}

/// `sigma = 2p k3 - psi k1`; zero exactly when `B` is odd.
pub fn symmetry_sigma(params: &ParamPair) -> Result<f64> {
    if params.kappa1 == 0.0 {
        return Err(Error::precondition("symmetry criterion needs k1 != 0"));
    }
    Ok(params.sigma())
}

/// `B` vanishes identically exactly when `k1 = 0`.
pub fn b_vanishes(params: &ParamPair) -> bool {
    params.kappa1 == 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pp(p: f64, k1: f64, k3: f64, k2: f64, psi: f64) -> ParamPair {
        ParamPair::new(p, k1, k3, k2, psi).unwrap()
    }

    #[test]
    fn paley_wiener_coefficients() {
        let s = solve_recurrence(&ParamPair::paley_wiener(), 4).unwrap();
        let want = [(1.0, 0.0), (0.0, 1.0), (-0.5, 0.0), (0.0, -1.0 / 6.0), (1.0 / 24.0, 0.0)];
        for (got, want) in s.pairs.iter().zip(want) {
            assert!((got.0 - want.0).abs() < 1e-16 && (got.1 - want.1).abs() < 1e-16);
        }
    }

    #[test]
    fn zero_matrix_gives_constant() {
        let s = solve_recurrence(&pp(0.7, 0.0, 0.0, 0.0, 2.0), 6).unwrap();
        assert_eq!(s.pairs[0], (1.0, 0.0));
        assert!(s.pairs[1..].iter().all(|&(a, b)| a == 0.0 && b == 0.0));
    }

    #[test]
    fn first_coefficients() {
        let x = pp(0.8, 1.3, -0.4, 0.9, 1.7);
        let s = solve_recurrence(&x, 3).unwrap();
        let b1 = x.kappa1 / (1.0 + 2.0 * x.p);
        assert!((s.pairs[1].1 - b1).abs() < 1e-15);
        assert!((s.pairs[1].0 - (b1 * x.psi - x.kappa3)).abs() < 1e-15);
    }

    #[test]
    fn pole_orders_rejected() {
        assert!(ParamPair::new(-0.5, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(ParamPair::new(-1.5 + 1e-9, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(ParamPair::new(-0.75, 1.0, 0.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn series_at_zero_and_quarter_turn() {
        let s = solve_for_radius(&ParamPair::paley_wiener(), 2.0, 1e-16).unwrap();
        let v0 = s.eval(Complex64::new(0.0, 0.0));
        assert_eq!((v0.a, v0.b), (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let v = s.eval(Complex64::new(std::f64::consts::FRAC_PI_2, 0.0));
        assert!(v.a.norm() < 1e-15 + v.tail);
        assert!((v.b - 1.0).norm() < 1e-15 + v.tail);
    }

    #[test]
    fn sharp_tail_below_coarse_tail() {
        let x = pp(1.3, 1.2, 0.3, 0.5, -2.0);
        let s = solve_recurrence(&x, 60).unwrap();
        for &r in &[0.5, 3.0, 10.0] {
            let sharp = s.tail_bound(r);
            let coarse = s.coarse_tail_bound(r);
            assert!(sharp <= coarse, "r={r}: {sharp} > {coarse}");
        }
    }

    #[test]
    fn tail_formula_instance() {
        // (C||P|| 10)^{N+1}/(N+1)! times the geometric factor
        let x = pp(0.0, 1.0, 0.0, 1.0, 0.0);
        let s = solve_recurrence(&x, 50).unwrap();
        let c = s.bound_constant * 10.0;
        let mut t = 1.0;
        for k in 1..=51 {
            t *= c / k as f64;
        }
        let g = 1.0 / (1.0 - c / 52.0);
        assert!(s.coarse_tail_bound(10.0) <= t * g * (1.0 + 1e-12));
        assert!(s.coarse_tail_bound(10.0) >= t);
    }

    #[test]
    fn auto_order_meets_tolerance() {
        let x = pp(2.0, 2.0, 0.5, 1.0, 3.0);
        let s = solve_for_radius(&x, 10.0, 1e-14).unwrap();
        assert!(s.tail_bound(10.0) <= 1e-14);
        assert!(s.order() < MAX_AUTO_TERMS);
    }

    #[test]
    fn recover_paley_wiener() {
        let s = solve_recurrence(&ParamPair::paley_wiener(), 4).unwrap();
        let r = recover_params(&s, 0.0).unwrap();
        assert!((r.kappa1 - 1.0).abs() < 1e-15);
        assert!((r.kappa2 - 1.0).abs() < 1e-15);
        assert!(r.kappa3.abs() < 1e-15 && r.psi.abs() < 1e-15);
    }

    #[test]
    fn recover_needs_b1() {
        let s = solve_recurrence(&pp(1.0, 0.0, 1.0, 1.0, 0.0), 4).unwrap();
        assert!(recover_params(&s, 1.0).is_err());
    }

    #[test]
    fn gamma_shift_example() {
        let x = pp(1.0, 1.0, 0.0, 1.0, 0.0);
        assert_eq!(gamma_shift(&x, 0.0), x);
        let y = gamma_shift(&x, 1.0);
        assert_eq!((y.kappa1, y.kappa3, y.kappa2, y.psi), (1.0, 1.0, 2.0, 2.0));
    }

    #[test]
    fn gamma_shift_functional_identity() {
        let x = pp(0.6, 1.1, 0.2, 0.8, -0.7);
        let g = 0.45;
        let y = gamma_shift(&x, g);
        let z = Complex64::new(1.0, 1.0);
        let sx = solve_for_radius(&x, 2.0, 1e-16).unwrap().eval(z);
        let sy = solve_for_radius(&y, 2.0, 1e-16).unwrap().eval(z);
        assert!((sx.a - (sy.a + g * sy.b)).norm() < 1e-10);
        assert!((sx.b - sy.b).norm() < 1e-10);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(symmetry_sigma(&pp(0.3, 2.0, 0.0, 5.0, 0.0)).unwrap(), 0.0);
        let x = pp(1.0, 4.0, 2.0, 3.0, 1.0);
        assert_eq!(symmetry_sigma(&x).unwrap(), 0.0);
        let s = solve_recurrence(&x, 4).unwrap();
        assert!(s.pairs[2].1.abs() < 1e-15);
        let y = pp(0.4, 1.5, 0.3, 2.0, 1.2);
        let s = solve_recurrence(&y, 4).unwrap();
        let want = -y.sigma() * s.pairs[1].1 / (2.0 + 2.0 * y.p);
        assert!((s.pairs[2].1 - want).abs() < 1e-15);
        assert!(symmetry_sigma(&pp(0.4, 0.0, 0.3, 2.0, 1.2)).is_err());
    }

    #[test]
    fn b_vanishing() {
        let x = pp(0.3, 0.0, 0.7, 1.0, 2.0);
        assert!(b_vanishes(&x));
        let s = solve_recurrence(&x, 20).unwrap();
        assert!(s.pairs.iter().all(|&(_, b)| b == 0.0));
        assert!(!b_vanishes(&ParamPair::paley_wiener()));
        let y = pp(0.5, 1e-3, 0.0, 1.0, 0.0);
        assert!(!b_vanishes(&y));
        let s = solve_recurrence(&y, 2).unwrap();
        assert!((s.pairs[1].1 - 1e-3 / 2.0).abs() < 1e-18);
    }

    fn params() -> impl Strategy<Value = ParamPair> {
        (-0.49f64..3.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -3.0f64..3.0)
            .prop_map(|(p, k1, k3, k2, psi)| ParamPair::new(p, k1, k3, k2, psi).unwrap())
    }

    proptest! {
        #[test]
        fn coefficient_bound_holds(x in params()) {
            let s = solve_recurrence(&x, 80).unwrap();
            let mut f = 1.0;
            for (n, &(a, b)) in s.pairs.iter().enumerate() {
                if n > 0 {
                    f *= s.bound_constant / n as f64;
                }
                prop_assert!(a.hypot(b) <= f * (1.0 + 1e-12) + 1e-300);
            }
        }

        #[test]
        fn recovery_roundtrip(x in params()) {
            prop_assume!(x.kappa1.abs() > 0.05);
            let s = solve_recurrence(&x, 3).unwrap();
            let r = recover_params(&s, x.p).unwrap();
            let sc = x.scale();
            prop_assert!((r.kappa1 - x.kappa1).abs() <= 1e-10 * sc);
            prop_assert!((r.kappa2 - x.kappa2).abs() <= 1e-10 * sc);
            prop_assert!((r.kappa3 - x.kappa3).abs() <= 1e-10 * sc);
            prop_assert!((r.psi - x.psi).abs() <= 1e-10 * sc);
        }

        #[test]
        fn odd_even_structure(p in -0.49f64..3.0, k1 in 0.1f64..2.0, k2 in -2.0f64..2.0) {
            // k3 = 0 and sigma = 0 force psi = 0
            let x = ParamPair::new(p, k1, 0.0, k2, 0.0).unwrap();
            let s = solve_recurrence(&x, 30).unwrap();
            for (n, &(a, b)) in s.pairs.iter().enumerate() {
                if n % 2 == 1 { prop_assert_eq!(a, 0.0); } else { prop_assert_eq!(b, 0.0); }
            }
        }

        #[test]
        fn continuity_in_parameters(x in params(), eps in 1e-9f64..1e-7) {
            let y = ParamPair { kappa2: x.kappa2 + eps, psi: x.psi - eps, ..x };
            let sx = solve_recurrence(&x, 10).unwrap();
            let sy = solve_recurrence(&y, 10).unwrap();
            for (a, b) in sx.pairs.iter().zip(&sy.pairs) {
                prop_assert!((a.0 - b.0).abs() + (a.1 - b.1).abs() <= 1e3 * eps);
            }
        }
    }
}
