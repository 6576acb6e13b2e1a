//! Command-line front end of the `talpha` binary.

mod asymptotics;
pub mod config;
mod kernel;
mod mobius;
pub mod output;
mod solve;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::Error;
use config::{RaySpec, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("numeric failure: {0}")]
    Numeric(Error),

    #[error("tolerance failure: {}", .0.join("; "))]
    Tolerance(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Tolerance(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) | CliError::Numeric(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(m) => CliError::Config(m),
            e @ Error::NodeCountMismatch { .. } => CliError::Config(e.to_string()),
            e => CliError::Numeric(e),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "talpha", version, about = "Kernels, Dirichlet solver and verification lab for the T_alpha Laplacian on the unit ball")]
pub struct Cli {
    #[command(flatten)]
    common: CommonArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Dimension of the ball
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Weight alpha > -1
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<f64>,

    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate P_alpha, G_alpha, RG_alpha, h_alpha, k_alpha along a ray and report the constants
    Kernel {
        /// Radii as start:stop:count
        #[arg(long)]
        ray: Option<String>,
    },
    /// Solve T_alpha u = psi, u = phi on the sphere
    Solve {
        /// Manufactured case supplying phi and psi
        #[arg(long)]
        case: Option<String>,
        /// Boundary samples at the sphere-rule nodes (last column is the value)
        #[arg(long)]
        phi_csv: Option<PathBuf>,
        /// Write the sphere-rule nodes to this file
        #[arg(long)]
        nodes_csv: Option<PathBuf>,
        /// Use the hyperbolic kernels (alpha = n - 2)
        #[arg(long)]
        hyperbolic: bool,
        #[arg(long)]
        sphere_order: Option<usize>,
        #[arg(long)]
        radial_order: Option<usize>,
        #[arg(long)]
        ball_sphere_order: Option<usize>,
    },
    /// Run the verification suite
    Verify {
        /// Every check for the configured (n, alpha)
        #[arg(long)]
        all: bool,
        /// Only the reconstruction of this manufactured case
        #[arg(long)]
        case: Option<String>,
    },
    /// Boundary asymptotics of singular sphere integrals and gradient probes
    Asymptotics {
        /// all, i_alpha, i_alpha_beta, d_integral, disc_i_alpha or gradient
        #[arg(long)]
        experiment: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        /// Exponent of the D(r, rho) integral
        #[arg(long)]
        s: Option<f64>,
        /// Gauss nodes per polar panel
        #[arg(long)]
        order: Option<usize>,
    },
    /// Möbius map identities on random pairs
    Mobius {
        #[arg(long)]
        self_test: bool,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl Cli {
    /// Merge the config file and the flags into a validated [`RunConfig`].
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.common.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(n) = self.common.n {
            c.n = n;
        }
        if let Some(a) = self.common.alpha {
            c.alpha = Some(a);
        }
        if let Some(o) = &self.common.out {
            c.out_dir = o.clone();
        }
        match &self.command {
            Command::Kernel { ray } => {
                c.command = "kernel".into();
                if let Some(r) = ray {
                    c.kernel.ray = RaySpec::parse(r)?;
                }
            }
            Command::Solve { case, phi_csv, nodes_csv, hyperbolic, sphere_order, radial_order, ball_sphere_order } => {
                c.command = "solve".into();
                let s = &mut c.solve;
                if case.is_some() {
                    s.case = case.clone();
                }
                if phi_csv.is_some() {
                    s.phi_csv = phi_csv.clone();
                }
                if nodes_csv.is_some() {
                    s.nodes_csv = nodes_csv.clone();
                }
                s.hyperbolic |= *hyperbolic;
                if let Some(o) = sphere_order {
                    s.level.sphere_order = *o;
                }
                if let Some(o) = radial_order {
                    s.level.radial_order = *o;
                }
                if let Some(o) = ball_sphere_order {
                    s.level.ball_sphere_order = *o;
                }
            }
            Command::Verify { all, case } => {
                c.command = "verify".into();
                c.verify.all |= *all;
                if case.is_some() {
                    c.verify.case = case.clone();
                }
            }
            Command::Asymptotics { experiment, beta, s, order } => {
                c.command = "asymptotics".into();
                let a = &mut c.asymptotics;
                if let Some(e) = experiment {
                    a.experiment = e.clone();
                }
                if beta.is_some() {
                    a.beta = *beta;
                }
                if s.is_some() {
                    a.s = *s;
                }
                if let Some(o) = order {
                    a.order = *o;
                }
            }
            Command::Mobius { self_test, pairs, seed } => {
                c.command = "mobius".into();
                let m = &mut c.mobius;
                m.self_test |= *self_test;
                if let Some(p) = pairs {
                    m.pairs = *p;
                }
                if let Some(s) = seed {
                    m.seed = *s;
                }
            }
        }
        c.validate()?;
        Ok(c)
    }
}

/// Outcome of a named check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// `value < tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, passed: value < tolerance }
    }

    /// A value judged elsewhere; reported without a tolerance.
    pub fn verdict(name: impl Into<String>, value: f64, passed: bool) -> Self {
        Check { name: name.into(), value, tolerance: f64::NAN, passed }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, tolerance: 1.0, passed: ok }
    }
}

/// Print one line per check and turn failures into [`CliError::Tolerance`].
pub(crate) fn conclude(checks: &[Check]) -> Result<(), CliError> {
    let mut failed = Vec::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if c.tolerance.is_nan() {
            println!("{status} {}: {:e}", c.name, c.value);
        } else {
            println!("{status} {}: {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
        }
        if !c.passed {
            failed.push(c.name.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Tolerance(failed))
    }
}

pub(crate) fn checks_csv(checks: &[Check]) -> output::Csv {
    let mut t = output::Csv::new(&["check", "value", "tolerance", "passed"]);
    for c in checks {
        t.row(vec![c.name.clone(), output::num(c.value), output::num(c.tolerance), c.passed.to_string()]);
    }
    t
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let config = cli.config()?;
    log::info!("running {} with n = {}, alpha = {}", config.command, config.n, config.alpha());
    match &cli.command {
        Command::Kernel { .. } => kernel::run(&config),
        Command::Solve { .. } => solve::run(&config),
        Command::Verify { .. } => verify::run(&config),
        Command::Asymptotics { .. } => asymptotics::run(&config),
        Command::Mobius { .. } => mobius::run(&config),
    }
}

/// Parse `args`, run, and map the outcome to the process exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("talpha: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
