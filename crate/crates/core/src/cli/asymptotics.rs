use super::config::RunConfig;
use super::output::{num, Csv, Sink};
use super::{checks_csv, conclude, Check, CliError};
use crate::estimates::{
    experiment_d, experiment_disc, experiment_gradient, experiment_i_alpha, experiment_i_alpha_beta, ExperimentResult,
    LabConfig,
};
use crate::{Error, Params, Result};

pub const EXPERIMENTS: [&str; 5] = ["i_alpha", "i_alpha_beta", "d_integral", "disc_i_alpha", "gradient"];

/// Largest change of a fitted exponent when the quadrature order is raised.
pub const RESOLUTION_TOL: f64 = 0.02;

fn run_one(name: &str, config: &RunConfig, lab: &LabConfig) -> Result<Vec<ExperimentResult>> {
    let ax = &config.asymptotics;
    let n = lab.n as f64;
    let alphas = |default: &[f64]| config.alpha.map(|a| vec![a]).unwrap_or_else(|| default.to_vec());
    let mut out = Vec::new();
    match name {
        "i_alpha" => {
            for a in alphas(&[0.25, 0.5, 0.75]) {
                if !(a > 0.0 && a < 1.0) {
                    return Err(Error::InvalidParams(format!("i_alpha needs 0 < alpha < 1, got {a}")));
                }
                out.push(experiment_i_alpha(lab, a)?);
            }
        }
        "i_alpha_beta" => {
            let betas = ax.beta.map(|b| vec![b]).unwrap_or_else(|| vec![0.5, 1.0]);
            for a in alphas(&[0.5]) {
                if a <= 0.0 {
                    return Err(Error::InvalidParams(format!("i_alpha_beta needs alpha > 0, got {a}")));
                }
                for &b in &betas {
                    out.push(experiment_i_alpha_beta(lab, a, b)?);
                }
            }
        }
        "d_integral" => {
            let ss = ax.s.map(|s| vec![s]).unwrap_or_else(|| vec![n - 2.0, n - 1.0, n + 1.0]);
            for s in ss {
                out.push(experiment_d(lab, s)?);
            }
        }
        "disc_i_alpha" => {
            for a in alphas(&[0.0, 0.5]) {
                out.push(experiment_disc(lab, a)?);
            }
        }
        "gradient" => {
            let p = Params::new(lab.n, config.alpha.unwrap_or(1.0))?;
            let betas = ax.beta.map(|b| vec![b]).unwrap_or_else(|| vec![1.0, 0.5]);
            for b in betas {
                out.push(experiment_gradient(lab, &p, b)?);
            }
        }
        _ => unreachable!("experiment names are validated"),
    }
    Ok(out)
}

fn file_stem(name: &str) -> String {
    let mut s: String = name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' }).collect();
    while s.ends_with('_') {
        s.pop();
    }
    s
}

pub fn run(config: &RunConfig) -> std::result::Result<(), CliError> {
    let which = config.asymptotics.experiment.as_str();
    let names: Vec<&str> = match which {
        "all" => EXPERIMENTS.to_vec(),
        e if EXPERIMENTS.contains(&e) => vec![e],
        e => {
            return Err(CliError::Config(format!("unknown experiment `{e}`; expected all or one of {}", EXPERIMENTS.join(", "))))
        }
    };
    if which == "all" && config.alpha.is_some() {
        return Err(CliError::Config("--alpha selects a single experiment parameter; pick one --experiment".into()));
    }
    let lab = config.asymptotics.lab(config.n);
    let mut results = Vec::new();
    for name in names {
        results.extend(run_one(name, config, &lab)?);
    }
    let mut sink = Sink::new(config)?;
    let mut summary = Csv::new(&["experiment", "fitted_exponent", "r_squared", "log_r_squared", "passed", "attained", "violations"]);
    let mut checks = Vec::new();
    for r in &results {
        let mut t = Csv::new(&["r", "one_minus_r", "value"]);
        for &(rr, v) in &r.samples {
            t.numbers(&[rr, 1.0 - rr, v]);
        }
        sink.csv(&format!("asymptotics_{}.csv", file_stem(&r.name)), &t)?;
        summary.row(vec![
            r.name.clone(),
            num(r.fit.fitted_exponent),
            num(r.fit.r_squared),
            r.log_fit.as_ref().map(|l| num(l.r_squared)).unwrap_or_default(),
            r.passed.to_string(),
            r.attained.to_string(),
            r.violations.len().to_string(),
        ]);
        for v in &r.violations {
            log::warn!("{}: local exponent {} on r in [{}, {}]", r.name, v.local_exponent, v.r_lo, v.r_hi);
        }
        checks.push(Check::verdict(r.name.clone(), r.fit.fitted_exponent, r.passed));
        if let Some(d) = r.resolution_delta {
            checks.push(Check::below(format!("{}/resolution", r.name), d, RESOLUTION_TOL));
        }
    }
    sink.csv("asymptotics_summary.csv", &summary)?;
    sink.csv("asymptotics_checks.csv", &checks_csv(&checks))?;
    sink.json("asymptotics_summary.json", &results)?;
    for f in sink.written() {
        println!("wrote {}", f.display());
    }
    conclude(&checks)
}
