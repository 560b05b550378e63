use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;

use commands::{Output, Report};
use config::{parse_complex, parse_matrix, FileConfig, FlagValues, Grid, RunConfig};
use error::CliError;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  configuration error (unreadable or malformed config, bad or missing flag)
  3  precondition violation (parameter outside the admissible class, pole, bad argument)
  4  tolerance breach (crosscheck residual or series tail above tolerance)
  5  numerical failure (non-convergence, quadrature or ODE breakdown, Weyl divergence)";

/// Structure functions, kernels, Hamiltonians and spectral measures of
/// homogeneous de Branges spaces.
#[derive(Debug, Parser)]
#[command(name = "dbhom", version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of A, B, E and the recurrence/closed-form residual over a grid.
    Eval,
    /// Table of K(z, w) over a grid of z for fixed w.
    Kernel,
    /// Table of H(a) over the real part of the grid (a > 0).
    Hamiltonian,
    /// Spectral measure constants of P, or a parameter realising given constants.
    Measure,
    /// Representatives of the parameter under both equivalences.
    Canonicalize,
    /// Weyl coefficient and boundary function over a grid of non-real z.
    Weyl,
    /// Maximal evaluator residuals over a grid; exit 4 above tolerance.
    Crosscheck,
}

#[derive(Debug, Args)]
struct Opts {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Order p.
    #[arg(long, global = true, allow_hyphen_values = true)]
    p: Option<f64>,
    /// Symmetric matrix as "k1,k3,k2".
    #[arg(long = "P", global = true, value_parser = parse_matrix, allow_hyphen_values = true)]
    matrix: Option<[f64; 3]>,
    /// Shear parameter psi.
    #[arg(long, global = true, allow_hyphen_values = true)]
    psi: Option<f64>,
    /// Density constant on the positive half-axis.
    #[arg(long, global = true)]
    mu_plus: Option<f64>,
    /// Density constant on the negative half-axis.
    #[arg(long, global = true)]
    mu_minus: Option<f64>,
    /// Grid "<re0:re1:n>x<im0:im1:m>".
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<Grid>,
    /// Tolerance (crosscheck threshold, ODE tolerance for weyl).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Second kernel argument "re,im".
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    w: Option<num_complex::Complex64>,
    /// Upper integration limit for weyl.
    #[arg(long = "t-max", global = true)]
    t_max: Option<f64>,
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_output(out: &Output, sink: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Output::Table { header, rows } => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row.iter().map(|&v| fmt17(v)))?;
            }
            w.flush()?;
        }
        Output::Record(v) => {
            serde_json::to_writer_pretty(&mut *sink, v).map_err(|e| CliError::Config(format!("output: {e}")))?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.opts.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    if let Some(cmd) = &file.command {
        let given = format!("{:?}", cli.command).to_lowercase();
        if *cmd != given {
            return Err(CliError::Config(format!("config is for command '{cmd}', not '{given}'")));
        }
    }
    let o = cli.opts;
    let flags = FlagValues {
        p: o.p,
        matrix: o.matrix,
        psi: o.psi,
        mu_plus: o.mu_plus,
        mu_minus: o.mu_minus,
        grid: o.grid,
        tol: o.tol,
        out: o.out,
        w: o.w,
        t_max: o.t_max,
    };
    let cfg = RunConfig::merge(file, flags)?;
    let report: Report = match cli.command {
        Command::Eval => commands::eval(&cfg)?,
        Command::Kernel => commands::kernel_table(&cfg)?,
        Command::Hamiltonian => commands::hamiltonian(&cfg)?,
        Command::Measure => commands::measure(&cfg)?,
        Command::Canonicalize => commands::canonicalize(&cfg)?,
        Command::Weyl => commands::weyl(&cfg)?,
        Command::Crosscheck => commands::crosscheck_summary(&cfg)?,
    };
    match &cfg.out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            write_output(&report.output, &mut f)?;
        }
        None => write_output(&report.output, &mut io::stdout().lock())?,
    }
    match report.breach {
        Some(msg) => Err(CliError::Tolerance(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dbhom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
