use dbhom::canonical::{integral_residual, weyl_coefficient, GridSpec};
use dbhom::closedform::{crosscheck, ClosedFormParams};
use dbhom::hamiltonian::{canonicalize_approx, canonicalize_approx_psi_zero, canonicalize_simeq, h_of, in_class_pp};
use dbhom::measures::{measure_of, params_of_measure, PowerMeasure};
use dbhom::spaces::{kernel, xi_hat, BackendChoice};
use dbhom::specfun::Tolerance;
use dbhom::{ClassTag, ParamPair};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;

pub enum Output {
    Table { header: Vec<&'static str>, rows: Vec<Vec<f64>> },
    Record(Value),
}

/// What a command produced, and whether it breached its tolerance.
pub struct Report {
    pub output: Output,
    pub breach: Option<String>,
}

impl From<Output> for Report {
    fn from(output: Output) -> Self {
        Report { output, breach: None }
    }
}

fn par_rows<T, F>(items: &[T], f: F) -> Result<Vec<Vec<f64>>, CliError>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<f64>, CliError> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn params_json(x: &ParamPair) -> Value {
    json!({
        "p": x.p,
        "P": [x.kappa1, x.kappa3, x.kappa2],
        "psi": x.psi,
    })
}

fn measure_json(m: &PowerMeasure) -> Value {
    json!({
        "mu_plus": m.mu_plus,
        "mu_minus": m.mu_minus,
        "exponent": m.exponent,
    })
}

pub fn eval(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cfg.params()?;
    let cf = ClosedFormParams::new(&x)?;
    let tol = Tolerance::default();
    let pts = cfg.grid()?.points();
    let rows = par_rows(&pts, |&z| {
        let (a, b) = cf.eval(z, tol)?;
        let e = a - Complex64::i() * b;
        let res = crosscheck(&x, z, tol)?;
        Ok(vec![z.re, z.im, a.re, a.im, b.re, b.im, e.re, e.im, res])
    })?;
    Ok(Output::Table {
        header: vec!["re_z", "im_z", "re_A", "im_A", "re_B", "im_B", "re_E", "im_E", "backend_residual"],
        rows,
    }
    .into())
}

pub fn kernel_table(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cfg.params()?;
    let e = xi_hat(&x, BackendChoice::Closed)?;
    let w = cfg.w;
    let pts = cfg.grid()?.points();
    let rows = par_rows(&pts, |&z| {
        let k = kernel(&e, z, w)?;
        Ok(vec![z.re, z.im, w.re, w.im, k.re, k.im])
    })?;
    Ok(Output::Table {
        header: vec!["re_z", "im_z", "re_w", "im_w", "re_K", "im_K"],
        rows,
    }
    .into())
}

pub fn hamiltonian(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cfg.params()?;
    let pts = cfg.grid()?.real_points();
    let rows = par_rows(&pts, |&a| {
        let h = h_of(&x, a)?;
        Ok(vec![a, h.m11, h.m12, h.m22, h.det()])
    })?;
    Ok(Output::Table {
        header: vec!["a", "h11", "h12", "h22", "det"],
        rows,
    }
    .into())
}

pub fn measure(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.has_params() {
        let x = cfg.params()?;
        return Ok(Output::Record(measure_json(&measure_of(&x)?)).into());
    }
    if cfg.has_measure() {
        let target = cfg.measure()?;
        let x = params_of_measure(&target)?;
        let mut v = params_json(&x);
        v["measure"] = measure_json(&measure_of(&x)?);
        return Ok(Output::Record(v).into());
    }
    Err(CliError::Config("measure needs either 'P' or 'mu_plus'/'mu_minus'".into()))
}

pub fn canonicalize(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cfg.params()?;
    match in_class_pp(&x) {
        ClassTag::InPP => {}
        tag => return Err(dbhom::Error::NotInClass(tag).into()),
    }
    let approx = canonicalize_approx(&x)?;
    let simeq = canonicalize_simeq(&x)?;
    let psi_free = if x.p != 0.0 {
        params_json(&canonicalize_approx_psi_zero(&x)?)
    } else {
        Value::Null
    };
    Ok(Output::Record(json!({
        "input": params_json(&x),
        "approx": params_json(&approx),
        "approx_psi_zero": psi_free,
        "simeq": params_json(&simeq),
    }))
    .into())
}

pub fn weyl(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cfg.params()?;
    let t_max = cfg.t_max.unwrap_or(100.0);
    let tol = cfg.tol_or(1e-10);
    let cf = ClosedFormParams::new(&x)?;
    let pts = cfg.grid()?.points();
    let rows = par_rows(&pts, |&z| {
        let r = weyl_coefficient(&x, t_max, z, tol)?;
        let (a, b) = cf.eval(z, Tolerance::default())?;
        let tau = -1.0 / r.q;
        let qec = (a * tau + b) / (-b * tau + a);
        Ok(vec![z.re, z.im, r.q.re, r.q.im, r.cauchy_estimate, qec.re, qec.im])
    })?;
    Ok(Output::Table {
        header: vec!["re_z", "im_z", "re_q", "im_q", "cauchy_estimate", "re_qec", "im_qec"],
        rows,
    }
    .into())
}

pub fn crosscheck_summary(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cfg.params()?;
    let tol = cfg.tol_or(1e-8);
    let pts = cfg.grid()?.points();
    let quad = GridSpec::new(vec![1.0], 1e-10)?;
    let res: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&z| -> Result<(f64, f64), CliError> {
            let backend = crosscheck(&x, z, Tolerance::default())?;
            let integral = integral_residual(&x, 0.5, 2.0, z, &quad)?;
            Ok((backend, integral))
        })
        .collect::<Result<_, _>>()?;
    let max_b = res.iter().fold(0.0f64, |m, r| m.max(r.0));
    let max_i = res.iter().fold(0.0f64, |m, r| m.max(r.1));
    let passed = max_b <= tol && max_i <= tol;
    let record = json!({
        "points": pts.len(),
        "tol": tol,
        "max_backend_residual": max_b,
        "max_integral_residual": max_i,
        "passed": passed,
    });
    Ok(Report {
        output: Output::Record(record),
        breach: (!passed).then(|| format!("residuals {max_b:e} / {max_i:e} exceed {tol:e}")),
    })
}
