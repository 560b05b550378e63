use std::path::{Path, PathBuf};
use std::str::FromStr;

use dbhom::measures::PowerMeasure;
use dbhom::ParamPair;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

/// `<re0:re1:n>x<im0:im1:m>`; each axis is inclusive and evenly spaced.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub re: (f64, f64, usize),
    pub im: (f64, f64, usize),
}

fn axis(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("axis '{s}' must look like start:end:count"));
    }
    let a = parts[0].trim().parse::<f64>().map_err(|e| format!("axis start '{}': {e}", parts[0]))?;
    let b = parts[1].trim().parse::<f64>().map_err(|e| format!("axis end '{}': {e}", parts[1]))?;
    let n = parts[2].trim().parse::<usize>().map_err(|e| format!("axis count '{}': {e}", parts[2]))?;
    if n == 0 {
        return Err(format!("axis '{s}' has zero points"));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(format!("axis '{s}' has non-finite bounds"));
    }
    Ok((a, b, n))
}

fn linspace((a, b, n): (f64, f64, usize)) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s
            .split_once('x')
            .ok_or_else(|| format!("grid '{s}' must look like re0:re1:n x im0:im1:m"))?;
        Ok(Grid {
            re: axis(re)?,
            im: axis(im)?,
        })
    }
}

impl Grid {
    /// Points in row-major order: imaginary part outer, real part inner.
    pub fn points(&self) -> Vec<Complex64> {
        let re = linspace(self.re);
        linspace(self.im)
            .into_iter()
            .flat_map(|y| re.iter().map(move |&x| Complex64::new(x, y)))
            .collect()
    }

    pub fn real_points(&self) -> Vec<f64> {
        linspace(self.re)
    }
}

/// Three numbers `k1,k3,k2`, given either as a string or a JSON array.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MatrixLiteral {
    Text(#[serde(deserialize_with = "de_matrix_text")] [f64; 3]),
    Array([f64; 3]),
}

impl MatrixLiteral {
    pub fn entries(&self) -> [f64; 3] {
        match *self {
            MatrixLiteral::Text(v) | MatrixLiteral::Array(v) => v,
        }
    }
}

pub fn parse_matrix(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("matrix entry '{t}': {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 3 {
        return Err(format!("matrix '{s}' needs exactly three entries k1,k3,k2"));
    }
    Ok([v[0], v[1], v[2]])
}

fn de_matrix_text<'de, D: serde::Deserializer<'de>>(d: D) -> Result<[f64; 3], D::Error> {
    let s = String::deserialize(d)?;
    parse_matrix(&s).map_err(serde::de::Error::custom)
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = re.trim().parse::<f64>().map_err(|e| format!("real part '{re}': {e}"))?;
    let im = im.trim().parse::<f64>().map_err(|e| format!("imaginary part '{im}': {e}"))?;
    Ok(Complex64::new(re, im))
}

/// Contents of a `--config` file. Every field is optional; flags win.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub p: Option<f64>,
    #[serde(rename = "P")]
    pub matrix: Option<MatrixLiteral>,
    pub psi: Option<f64>,
    pub mu_plus: Option<f64>,
    pub mu_minus: Option<f64>,
    pub grid: Option<String>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub w: Option<[f64; 2]>,
    pub t_max: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!(
                "{}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct FlagValues {
    pub p: Option<f64>,
    pub matrix: Option<[f64; 3]>,
    pub psi: Option<f64>,
    pub mu_plus: Option<f64>,
    pub mu_minus: Option<f64>,
    pub grid: Option<Grid>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub w: Option<Complex64>,
    pub t_max: Option<f64>,
}

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub p: Option<f64>,
    pub matrix: Option<[f64; 3]>,
    pub psi: Option<f64>,
    pub mu_plus: Option<f64>,
    pub mu_minus: Option<f64>,
    pub grid: Option<Grid>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub w: Complex64,
    pub t_max: Option<f64>,
}

impl RunConfig {
    pub fn merge(file: FileConfig, flags: FlagValues) -> Result<Self, CliError> {
        let grid = match flags.grid {
            Some(g) => Some(g),
            None => file
                .grid
                .as_deref()
                .map(Grid::from_str)
                .transpose()
                .map_err(|e| CliError::Config(format!("field 'grid': {e}")))?,
        };
        let cfg = RunConfig {
            p: flags.p.or(file.p),
            matrix: flags.matrix.or(file.matrix.map(|m| m.entries())),
            psi: flags.psi.or(file.psi),
            mu_plus: flags.mu_plus.or(file.mu_plus),
            mu_minus: flags.mu_minus.or(file.mu_minus),
            grid,
            tol: flags.tol.or(file.tol),
            out: flags.out.or(file.out),
            w: flags.w.or(file.w.map(|[a, b]| Complex64::new(a, b))).unwrap_or(Complex64::new(0.0, 0.0)),
            t_max: flags.t_max.or(file.t_max),
        };
        if let Some(t) = cfg.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("field 'tol': must be positive, got {t}")));
            }
        }
        Ok(cfg)
    }

    fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Config(format!("missing '{name}'")))
    }

    pub fn params(&self) -> Result<ParamPair, CliError> {
        let p = Self::need(self.p, "p")?;
        let [k1, k3, k2] = Self::need(self.matrix, "P")?;
        let psi = self.psi.unwrap_or(0.0);
        Ok(ParamPair::new(p, k1, k3, k2, psi)?)
    }

    pub fn has_params(&self) -> bool {
        self.matrix.is_some()
    }

    pub fn measure(&self) -> Result<PowerMeasure, CliError> {
        let p = Self::need(self.p, "p")?;
        let mp = self.mu_plus.unwrap_or(0.0);
        let mm = self.mu_minus.unwrap_or(0.0);
        Ok(PowerMeasure::new(mp, mm, 2.0 * p)?)
    }

    pub fn has_measure(&self) -> bool {
        self.mu_plus.is_some() || self.mu_minus.is_some()
    }

    pub fn grid(&self) -> Result<&Grid, CliError> {
        self.grid.as_ref().ok_or_else(|| CliError::Config("missing 'grid'".into()))
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:1:3x-1:1:2".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], Complex64::new(0.0, -1.0));
        assert_eq!(pts[2], Complex64::new(1.0, -1.0));
        assert_eq!(pts[5], Complex64::new(1.0, 1.0));
        assert!("0:1x0:1:1".parse::<Grid>().is_err());
        assert!("0:1:0x0:0:1".parse::<Grid>().is_err());
        let single: Grid = "2:5:1x0:0:1".parse().unwrap();
        assert_eq!(single.points(), vec![Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn matrix_literals() {
        assert_eq!(parse_matrix("1, 0.5,2").unwrap(), [1.0, 0.5, 2.0]);
        assert!(parse_matrix("1,2").is_err());
        let f: FileConfig = serde_json::from_str(r#"{"P": "1,0,1"}"#).unwrap();
        assert_eq!(f.matrix.unwrap().entries(), [1.0, 0.0, 1.0]);
        let f: FileConfig = serde_json::from_str(r#"{"P": [2, 0, 3]}"#).unwrap();
        assert_eq!(f.matrix.unwrap().entries(), [2.0, 0.0, 3.0]);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"pp": 1}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig {
            p: Some(1.0),
            psi: Some(2.0),
            ..Default::default()
        };
        let flags = FlagValues {
            p: Some(0.5),
            ..Default::default()
        };
        let cfg = RunConfig::merge(file, flags).unwrap();
        assert_eq!(cfg.p, Some(0.5));
        assert_eq!(cfg.psi, Some(2.0));
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert!(parse_complex("a,b").is_err());
    }
}
