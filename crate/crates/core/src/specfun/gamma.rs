use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::POLE_RADIUS;
use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn near_pole(z: Complex64) -> bool {
    let k = z.re.round();
    k <= 0.0 && (z - Complex64::new(k, 0.0)).norm() < POLE_RADIUS
}

fn lanczos_ln(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

// log sin(pi z) for Im z >= 0, continuous across the closed upper half-plane.
fn ln_sin_pi_upper(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let u = (2.0 * PI * i * z).exp();
    -i * PI * z + Complex64::new(-LN_2, PI / 2.0) + (Complex64::new(1.0, 0.0) - u).ln()
}

/// Principal branch of `log Gamma(z)`, analytic off the nonpositive real axis
/// and real on the positive one.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::precondition("log_gamma: non-finite argument"));
    }
    if near_pole(z) {
        return Err(Error::Pole {
            what: "log_gamma",
            value: z.re,
        });
    }
    if z.re >= 0.5 {
        return Ok(lanczos_ln(z));
    }
    if z.im < 0.0 {
        return log_gamma(z.conj()).map(|v| v.conj());
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(LN_PI - ln_sin_pi_upper(z) - lanczos_ln(one - z))
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

/// `1/Gamma(z)`, entire; exactly zero at the nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if near_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..n {
        acc *= a + k as f64;
    }
    acc
}
