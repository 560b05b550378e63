//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::Instant;

use dbhom::canonical::{cmat_det, cmat_mul, integral_residual, q_ec, solution_family, transfer_matrix, GridSpec};
use dbhom::closedform::crosscheck;
use dbhom::hamiltonian::{
    approx_equiv, canonicalize_approx, canonicalize_approx_psi_zero, canonicalize_simeq, in_class_pp,
    rescale_params, simeq_equiv,
};
use dbhom::measures::{asymptotic_ratio, density_check, measure_equiv, measure_of, params_of_measure, PowerMeasure};
use dbhom::recurrence::{recover_params, solve_recurrence};
use dbhom::spaces::{gram_spectrum, hb_check, homogeneity_defect, kernel, xi_hat, BackendChoice, PairFn, PointSet};
use dbhom::specfun::{bessel_i, bessel_j, hyp0f1, kummer_m_eval, Tolerance};
use dbhom::{ClassTag, Complex64, ParamPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sym_psd(r: &mut ChaCha8Rng, max_norm: f64) -> (f64, f64, f64) {
    let th: f64 = r.random_range(0.0..PI);
    let l1: f64 = r.random_range(0.0..max_norm);
    let l2: f64 = r.random_range(0.0..max_norm);
    let (s, co) = th.sin_cos();
    (l1 * co * co + l2 * s * s, (l1 - l2) * s * co, l1 * s * s + l2 * co * co)
}

/// A random parameter in the admissible class.
fn member(r: &mut ChaCha8Rng, p_range: (f64, f64), max_norm: f64) -> ParamPair {
    loop {
        let p = r.random_range(p_range.0..p_range.1);
        let (k1, k3, k2) = sym_psd(r, max_norm);
        let psi = r.random_range(-3.0..3.0);
        if let Ok(x) = ParamPair::new(p, k1, k3, k2, psi) {
            if in_class_pp(&x) == ClassTag::InPP && k1 > 1e-3 {
                return x;
            }
        }
    }
}

fn disk(r: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let rho = radius * r.random_range(0.0f64..1.0).sqrt();
    Complex64::from_polar(rho, r.random_range(0.0..2.0 * PI))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn backend_agreement() -> Outcome {
    let mut r = rng(1);
    let tol = Tolerance::default();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let x = member(&mut r, (-0.49, 3.0), 2.0);
        for _ in 0..20 {
            let z = disk(&mut r, 10.0);
            let res = crosscheck(&x, z, tol).map_err(err)?;
            worst = worst.max(res);
        }
    }
    check(worst <= 1e-8, || format!("max residual {worst:e}"))?;
    Ok(format!("max normalized residual {worst:.2e}"))
}

fn paley_wiener_anchor() -> Outcome {
    let mut r = rng(2);
    let pw = ParamPair::paley_wiener();
    let mut worst = 0.0f64;
    for choice in [BackendChoice::Closed, BackendChoice::Series { radius: 10.0 }] {
        let e = xi_hat(&pw, choice).map_err(err)?;
        for _ in 0..50 {
            let z = disk(&mut r, 10.0);
            let (a, b) = e.ab(z).map_err(err)?;
            let s = 1.0 + z.cos().norm() + z.sin().norm();
            worst = worst.max((a - z.cos()).norm() / s).max((b - z.sin()).norm() / s);
        }
    }
    check(worst <= 1e-12, || format!("A, B deviate by {worst:e}"))?;
    let m = measure_of(&pw).map_err(err)?;
    check((m.mu_plus - 1.0).abs() <= 1e-12 && (m.mu_minus - 1.0).abs() <= 1e-12, || format!("{m:?}"))?;
    let mut qdev = 0.0f64;
    for _ in 0..10 {
        let z = c(r.random_range(-5.0..5.0), r.random_range(0.2..3.0));
        qdev = qdev.max((q_ec(&pw, z, 20.0, 1e-10).map_err(err)?.im - 1.0).abs());
    }
    check(qdev <= 1e-8, || format!("Im q deviates by {qdev:e}"))?;
    Ok(format!("A,B {worst:.1e}; Im q {qdev:.1e}"))
}

fn canonical_consistency() -> Outcome {
    let mut r = rng(3);
    let tol = Tolerance::default();
    let mut worst_res = 0.0f64;
    let grid = GridSpec::new(vec![1.0], 1e-10).map_err(err)?;
    for _ in 0..50 {
        let x = member(&mut r, (-0.45, 2.0), 2.0);
        let a = r.random_range(0.1..2.0);
        let b = a + r.random_range(0.1..3.0);
        let z = disk(&mut r, 5.0);
        worst_res = worst_res.max(integral_residual(&x, a, b, z, &grid).map_err(err)?);
    }
    check(worst_res <= 1e-8, || format!("integral residual {worst_res:e}"))?;
    let (mut worst_mult, mut worst_det, mut worst_fam) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let x = member(&mut r, (-0.45, 2.0), 2.0);
        let z = disk(&mut r, 3.0);
        let t: Vec<f64> = (0..3).map(|_| r.random_range(0.1..5.0)).collect();
        let ab = transfer_matrix(&x, t[0], t[1], z, 1e-11).map_err(err)?.matrix;
        let bc = transfer_matrix(&x, t[1], t[2], z, 1e-11).map_err(err)?.matrix;
        let ac = transfer_matrix(&x, t[0], t[2], z, 1e-11).map_err(err)?.matrix;
        let scale = ac.iter().flatten().fold(1.0f64, |m, v| m.max(v.norm()));
        let prod = cmat_mul(&ab, &bc);
        let d = prod.iter().flatten().zip(ac.iter().flatten()).fold(0.0f64, |m, (u, v)| m.max((u - v).norm()));
        worst_mult = worst_mult.max(d / scale);
        worst_det = worst_det.max((cmat_det(&ac) - 1.0).norm() / (scale * scale));

        let z = disk(&mut r, 5.0);
        let (a1, b1) = solution_family(&x, 1.0, z, tol).map_err(err)?;
        for _ in 0..3 {
            let a = r.random_range(0.1..5.0);
            let w = transfer_matrix(&x, 1.0, a, z, 1e-12).map_err(err)?.matrix;
            let (fa, fb) = solution_family(&x, a, z, tol).map_err(err)?;
            let s = 1.0 + fa.norm() + fb.norm();
            let da = (a1 * w[0][0] + b1 * w[1][0] - fa).norm() / s;
            let db = (a1 * w[0][1] + b1 * w[1][1] - fb).norm() / s;
            worst_fam = worst_fam.max(da).max(db);
        }
    }
    check(worst_mult <= 1e-8, || format!("multiplicativity {worst_mult:e}"))?;
    check(worst_det <= 1e-8, || format!("det {worst_det:e}"))?;
    check(worst_fam <= 1e-6, || format!("family vs ODE {worst_fam:e}"))?;
    Ok(format!(
        "residual {worst_res:.1e}, multiplicativity {worst_mult:.1e}, det {worst_det:.1e}, family {worst_fam:.1e}"
    ))
}

fn random_points(r: &mut ChaCha8Rng, n: usize) -> PointSet {
    loop {
        let pts: Vec<_> = (0..n).map(|_| disk(r, 4.0)).collect();
        if let Ok(s) = PointSet::new(pts) {
            return s;
        }
    }
}

fn kernel_positivity() -> Outcome {
    let mut r = rng(4);
    let (mut worst_g, mut worst_h) = (f64::INFINITY, f64::INFINITY);
    for i in 0..100 {
        let x = member(&mut r, (-0.45, 2.5), 2.0);
        let e = xi_hat(&x, BackendChoice::Closed).map_err(err)?;
        let n = 1 + i % 8;
        let pts = random_points(&mut r, n);
        let g = gram_spectrum(&e, &pts).map_err(err)?;
        worst_g = worst_g.min(g.min_eig / g.trace);
        let a = 1.0 - r.random_range(0.0..1.0);
        let h = homogeneity_defect(&e, x.p, a, &pts).map_err(err)?;
        worst_h = worst_h.min(h.min_eig / h.trace);
    }
    check(worst_g >= -1e-10, || format!("Gram {worst_g:e}"))?;
    check(worst_h >= -1e-10, || format!("homogeneity {worst_h:e}"))?;
    Ok(format!("min eig / trace: Gram {worst_g:.1e}, homogeneity {worst_h:.1e}"))
}

fn roundtrips() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = member(&mut r, (-0.45, 3.0), 2.0);
        let seq = solve_recurrence(&x, 4).map_err(err)?;
        let y = recover_params(&seq, x.p).map_err(err)?;
        let d = [
            x.kappa1 - y.kappa1,
            x.kappa2 - y.kappa2,
            x.kappa3 - y.kappa3,
            x.psi - y.psi,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
            / x.scale();
        worst = worst.max(d);
    }
    check(worst <= 1e-10, || format!("recovery {worst:e}"))?;
    for _ in 0..100 {
        let x = member(&mut r, (-0.45, 3.0), 2.0);
        let a = canonicalize_approx(&x).map_err(err)?;
        check(canonicalize_approx(&a).map_err(err)? == a, || "approx canonicalization not idempotent".into())?;
        check(approx_equiv(&x, &a).map_err(err)?, || format!("{x:?} not approx-equivalent to {a:?}"))?;
        if x.p != 0.0 {
            let b = canonicalize_approx_psi_zero(&x).map_err(err)?;
            check(canonicalize_approx_psi_zero(&b).map_err(err)? == b, || "psi-free form not idempotent".into())?;
            check(approx_equiv(&x, &b).map_err(err)?, || "psi-free form changes the space".into())?;
        }
        let s = canonicalize_simeq(&x).map_err(err)?;
        check(canonicalize_simeq(&s).map_err(err)? == s, || "rescaling canonicalization not idempotent".into())?;
        check(simeq_equiv(&x, &s).map_err(err)?, || format!("{x:?} not rescaling-equivalent to {s:?}"))?;
    }
    let mut kdev = 0.0f64;
    for _ in 0..20 {
        let x = member(&mut r, (-0.45, 2.5), 2.0);
        let y = canonicalize_approx(&x).map_err(err)?;
        let ex = xi_hat(&x, BackendChoice::Closed).map_err(err)?;
        let ey = xi_hat(&y, BackendChoice::Closed).map_err(err)?;
        let (z, w) = (disk(&mut r, 4.0), disk(&mut r, 4.0));
        let kx = kernel(&ex, z, w).map_err(err)?;
        let ky = kernel(&ey, z, w).map_err(err)?;
        kdev = kdev.max((kx - ky).norm() / (1.0 + kx.norm()));
    }
    check(kdev <= 1e-9, || format!("kernels differ by {kdev:e}"))?;
    Ok(format!("recovery {worst:.1e}, kernel agreement {kdev:.1e}"))
}

fn measure_roundtrip() -> Outcome {
    let mut r = rng(6);
    for _ in 0..100 {
        let e = r.random_range(-0.9..4.0);
        let side = r.random_range(0..4);
        let mp = if side == 1 { 0.0 } else { r.random_range(-3.0f64..3.0).exp() };
        let mm = if side == 2 { 0.0 } else { r.random_range(-3.0f64..3.0).exp() };
        let target = PowerMeasure::new(mp, mm, e).map_err(err)?;
        let x = params_of_measure(&target).map_err(err)?;
        let back = measure_of(&x).map_err(err)?;
        check(back.approx_eq(&target, 1e-10), || format!("{target:?} came back as {back:?}"))?;
    }
    for _ in 0..50 {
        let x = member(&mut r, (-0.45, 3.0), 2.0);
        let cc = r.random_range(-2.0f64..2.0).exp();
        let y = rescale_params(&x, cc).map_err(err)?;
        check(measure_equiv(&x, &y).map_err(err)?, || format!("{x:?} vs rescaled by {cc}"))?;
    }
    let mut agree = 0;
    for i in 0..100 {
        let x = member(&mut r, (-0.45, 3.0), 2.0);
        let y = rescale_params(&x, r.random_range(0.3..3.0)).map_err(err)?;
        let y = if i % 2 == 0 {
            y
        } else {
            ParamPair::new(y.p, y.kappa1, y.kappa3, y.kappa2 + r.random_range(0.05..1.0), y.psi).map_err(err)?
        };
        let by_measure = measure_of(&x).map_err(err)?.approx_eq(&measure_of(&y).map_err(err)?, 1e-8);
        check(measure_equiv(&x, &y).map_err(err)? == by_measure, || format!("disagreement on {x:?}, {y:?}"))?;
        agree += 1;
    }
    Ok(format!("100 roundtrips, 50 rescalings, {agree} consistency pairs"))
}

fn asymptotic_law() -> Outcome {
    let tol = Tolerance::default();
    let mut report = Vec::new();
    for delta in [0.0, 1.0, -1.0] {
        for p in [0.0, 0.5, 1.0] {
            let ys = [20.0, 50.0, 100.0, 200.0, -20.0, -50.0, -100.0, -200.0];
            let mut devs = Vec::new();
            for &y in &ys {
                devs.push((y, (asymptotic_ratio(delta, p, y, tol).map_err(err)? - 1.0).abs()));
            }
            // a single C over the sampled |y|; held-out |y| must obey the same law
            let cfit = devs.iter().fold(0.0f64, |m, &(y, d)| m.max(d * y.abs()));
            check(cfit < 5.0, || format!("delta {delta}, p {p}: C = {cfit}"))?;
            for y in [500.0, -1000.0, 2000.0] {
                let d = (asymptotic_ratio(delta, p, y, tol).map_err(err)? - 1.0).abs();
                check(d <= 2.0 * cfit / y.abs() + 1e-12, || format!("delta {delta}, p {p}, y {y}: {d:e} vs C {cfit:e}"))?;
            }
            // the wrong exponential branch must fail visibly when delta != 0
            if delta != 0.0 {
                let r = asymptotic_ratio(delta, p, -100.0, tol).map_err(err)?;
                let wrong = r * (-PI * delta).exp();
                check((wrong - 1.0).abs() > 0.5, || "sign branch indistinguishable".into())?;
            }
            report.push(cfit);
        }
    }
    let cmax = report.iter().cloned().fold(0.0, f64::max);
    Ok(format!("9 cases, largest fitted C {cmax:.3}"))
}

fn corrected_family() -> Outcome {
    let x = ParamPair::new(0.0, 1.0, 0.0, 1.0, 1.0).map_err(err)?;
    let e = xi_hat(&x, BackendChoice::Closed).map_err(err)?;
    let grid = PointSet::new((1..=20).map(|k| c(0.7 * k as f64 - 7.0, 0.1 * k as f64)).collect()).map_err(err)?;
    let real = PointSet::new((-40..=40).map(|k| c(0.25 * k as f64, 0.0)).collect()).map_err(err)?;
    check(hb_check(&e, &grid, &real).map_err(err)?, || "Hermite-Biehler check failed".into())?;
    check(in_class_pp(&x) == ClassTag::InPP, || "class check failed".into())?;
    let pts = PointSet::new(vec![c(0.0, 0.0), c(1.0, 0.5), c(-2.0, 1.0), c(0.5, -1.0)]).map_err(err)?;
    for a in [0.1, 0.5, 0.9] {
        let h = homogeneity_defect(&e, 0.0, a, &pts).map_err(err)?;
        check(h.min_eig >= -1e-10 * h.trace, || format!("homogeneity defect {:e} at a = {a}", h.min_eig))?;
    }
    let m = measure_of(&x).map_err(err)?;
    let kappa = x.det().sqrt();
    let want = (PI * x.sigma() / kappa).exp();
    let ratio = m.mu_plus / m.mu_minus;
    check((ratio - want).abs() <= 1e-8 * want, || format!("ratio {ratio} vs {want}"))?;
    check((m.mu_plus - m.mu_minus).abs() > 1e-3, || "measure is symmetric".into())?;
    let mut rs = Vec::new();
    for xx in [2.0, -2.0] {
        let d = density_check(&x, xx, 1e-2, 3000.0, 1e-6).map_err(err)?;
        let q = d.observed / d.predicted;
        check((0.98..=1.02).contains(&q), || format!("x = {xx}: observed {} predicted {}", d.observed, d.predicted))?;
        rs.push(q);
    }
    Ok(format!("mu+/mu- = {ratio:.6}, density ratios {:.6} {:.6}", rs[0], rs[1]))
}

fn special_functions() -> Outcome {
    let mut r = rng(9);
    let tol = Tolerance::default();
    let m = |a: Complex64, b: f64, z: Complex64| kummer_m_eval(a, b, z, tol).map_err(err);
    let mut worst = [0.0f64; 5];
    for _ in 0..100 {
        let a = c(r.random_range(-3.0..3.0), r.random_range(-2.0..2.0));
        let b = r.random_range(1.5..5.0);
        let z = disk(&mut r, 5.0);
        // contiguous relations
        let (m0, mm, mp) = (m(a, b, z)?, m(a - 1.0, b, z)?, m(a + 1.0, b, z)?);
        let t = [(b - a) * mm, (2.0 * a - b + z) * m0, a * mp];
        let s: f64 = t.iter().map(|v| v.norm()).sum::<f64>().max(1e-300);
        let d1 = (t[0] + t[1] - t[2]).norm() / s;
        let (mb1, mbp) = (m(a, b - 1.0, z)?, m(a, b + 1.0, z)?);
        let u = [b * (b - 1.0) * mb1, b * (1.0 - b - z) * m0, z * (b - a) * mbp];
        let s2: f64 = u.iter().map(|v| v.norm()).sum::<f64>().max(1e-300);
        let d2 = (u[0] + u[1] + u[2]).norm() / s2;
        worst[0] = worst[0].max(d1).max(d2);
        // Kummer transformation
        let kt = z.exp() * m(c(b, 0.0) - a, b, -z)?;
        worst[1] = worst[1].max((m0 - kt).norm() / (m0.norm() + kt.norm()).max(1e-300));
        // derivative relation via a Cauchy integral on a circle
        let (nodes, rad) = (32, 0.5);
        let mut der = c(0.0, 0.0);
        for k in 0..nodes {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
            der += m(a, b, z + rad * w)? / w;
        }
        der /= nodes as f64 * rad;
        let want = a / b * m(a + 1.0, b + 1.0, z)?;
        let scale = (0..nodes)
            .map(|k| m(a, b, z + rad * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64)).map(|v| v.norm()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(want.norm(), f64::max);
        worst[2] = worst[2].max((der - want).norm() / scale.max(1e-300));
        // Bessel: I_nu(x) = i^-nu J_nu(ix) and the three-term recurrences
        let nu = r.random_range(0.0..4.0);
        let xr = r.random_range(0.1..6.0);
        let iv = bessel_i(nu, c(xr, 0.0), tol).map_err(err)?;
        let jv = bessel_j(nu, c(0.0, xr), tol).map_err(err)?;
        let conv = Complex64::from_polar(1.0, -0.5 * PI * nu) * jv;
        worst[3] = worst[3].max((iv - conv).norm() / iv.norm());
        let zb = disk(&mut r, 5.0) + c(0.5, 0.0);
        let nu1 = nu + 1.0;
        let j = |v: f64| bessel_j(v, zb, tol).map_err(err);
        let (jm, j0, jp) = (j(nu1 - 1.0)?, j(nu1)?, j(nu1 + 1.0)?);
        let sj = jm.norm() + jp.norm() + (2.0 * nu1 / zb * j0).norm();
        let i = |v: f64| bessel_i(v, zb, tol).map_err(err);
        let (im, i0, ip) = (i(nu1 - 1.0)?, i(nu1)?, i(nu1 + 1.0)?);
        let si = im.norm() + ip.norm() + (2.0 * nu1 / zb * i0).norm();
        worst[3] = worst[3]
            .max((jm + jp - 2.0 * nu1 / zb * j0).norm() / sj)
            .max((im - ip - 2.0 * nu1 / zb * i0).norm() / si);
    }
    // 0F1 as the limit of M(a, b, z/a)
    for _ in 0..10 {
        let b = r.random_range(0.5..4.0);
        let z = disk(&mut r, 5.0);
        let f = hyp0f1(b, z, tol).map_err(err)?;
        let mut prev = f64::INFINITY;
        for a in [10.0, 100.0, 1000.0, 10000.0] {
            let d = (m(c(a, 0.0), b, z / a)? - f).norm();
            check(d < prev, || format!("0F1 limit not monotone at a = {a}"))?;
            prev = d;
        }
        worst[4] = worst[4].max(prev / f.norm().max(1e-300));
    }
    check(worst[..4].iter().all(|&w| w <= 1e-9), || format!("worst deviations {worst:?}"))?;
    check(worst[4] <= 1e-3, || format!("0F1 limit stalls at {:e}", worst[4]))?;
    Ok(format!(
        "contiguous {:.1e}, Kummer {:.1e}, derivative {:.1e}, Bessel {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("backend agreement", backend_agreement),
        ("Paley-Wiener anchor", paley_wiener_anchor),
        ("canonical-system consistency", canonical_consistency),
        ("kernel positivity and homogeneity", kernel_positivity),
        ("recovery and canonicalization roundtrips", roundtrips),
        ("measure roundtrip and equivalence", measure_roundtrip),
        ("asymptotic law", asymptotic_law),
        ("corrected family", corrected_family),
        ("special-function identities", special_functions),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS  {}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail} ({secs:.1}s)", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
