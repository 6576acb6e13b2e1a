use serde::Serialize;

use super::config::RunConfig;
use super::output::{num, Csv, Sink};
use super::{checks_csv, conclude, Check, CliError};
use crate::corpus::{green_field, Case};
use crate::kernels::{self, KernelConstants};
use crate::moebius::norm_sq;
use crate::operators::t_alpha_relative_residual;
use crate::quadrature::SphereRule;
use crate::solver::{
    default_grid, green_identity_residual, grid, sphere_mean_value, verify_representation, GreenIdentity,
    HyperbolicSolver, Level, MeanValue, Solver, SphereMeanValue, VerifyReport,
};
use crate::{Params, Result};

pub const MEAN_VALUE_TOL: f64 = 1e-4;
pub const SLICE_MEAN_VALUE_TOL: f64 = 1e-5;
pub const REPRESENTATION_TOL: f64 = 1e-3;
pub const GREEN_IDENTITY_TOL: f64 = 1e-6;
pub const ANNULUS_TOL: f64 = 1e-5;
pub const HARMONICITY_TOL: f64 = 1e-4;
pub const RADIAL_ODE_TOL: f64 = 1e-6;
pub const RADIAL_ODE_STEP: f64 = 2e-4;
pub const HYPERBOLIC_KERNEL_TOL: f64 = 1e-12;
pub const HYPERBOLIC_GREEN_TOL: f64 = 1e-6;
pub const HYPERBOLIC_SOLVE_TOL: f64 = 1e-4;

/// Cases reconstructed by `verify --all`.
pub const REPRESENTATION_CASES: [Case; 5] =
    [Case::OneMinusR2, Case::X1, Case::X1sqMinusX2sq, Case::OneMinusR2Squared, Case::MoebiusSlice];

/// Pairs `(u, v)` for the Green identity on `r𝔹`.
const GREEN_PAIRS: [(Case, Case); 4] = [
    (Case::One, Case::OneMinusR2),
    (Case::X1, Case::OneMinusR2Squared),
    (Case::X1sqMinusX2sq, Case::OneMinusR2),
    (Case::MoebiusSlice, Case::X1),
];

const GREEN_RADIUS: f64 = 0.7;
const ANNULUS: (f64, f64) = (0.1, 0.8);
const MEAN_SPHERE_RADIUS: f64 = 0.5;

#[derive(Debug, Serialize)]
struct NamedMeanValue {
    case: String,
    mean_value: MeanValue,
}

#[derive(Debug, Serialize)]
struct NamedGreenIdentity {
    u: String,
    v: String,
    identity: GreenIdentity,
}

#[derive(Debug, Serialize, Default)]
struct VerifySummary {
    constants: Option<KernelConstants>,
    mean_values: Vec<NamedMeanValue>,
    /// Mean values over the sphere of radius 1/2; reported, not asserted.
    sphere_mean_values: Vec<SphereMeanValue>,
    green_identities: Vec<NamedGreenIdentity>,
    representations: Vec<VerifyReport>,
    checks: Vec<Check>,
}

/// `(sphere order, radial order)` for the Green identities; the volume side
/// is the expensive one and shrinks with `n`.
fn identity_orders(n: usize) -> (usize, usize) {
    match n {
        0..=3 => (32, 48),
        4 => (16, 32),
        _ => (10, 24),
    }
}

fn mean_value_level(n: usize) -> Level {
    match n {
        0..=3 => Level { sphere_order: 32, radial_order: 32, ball_sphere_order: 16 },
        4 => Level { sphere_order: 24, radial_order: 24, ball_sphere_order: 12 },
        _ => Level { sphere_order: 12, radial_order: 16, ball_sphere_order: 8 },
    }
}

fn mean_values(p: &Params, out: &mut VerifySummary) -> Result<()> {
    let n = p.n();
    let solver = Solver::at_level(p, mean_value_level(n))?;
    out.constants = Some(solver.constants().clone());
    for (case, tol) in [(Case::OneMinusR2, MEAN_VALUE_TOL), (Case::MoebiusSlice, SLICE_MEAN_VALUE_TOL)] {
        let u = case.build(p)?;
        let mv = solver.mean_value_center(&u)?;
        out.checks.push(Check::below(format!("mean_value/{case}"), mv.rel_error, tol));
        out.mean_values.push(NamedMeanValue { case: case.id().into(), mean_value: mv });
        let k = solver.constants();
        let smv = sphere_mean_value(k, &u, MEAN_SPHERE_RADIUS, solver.sphere(), mean_value_level(n).radial_order)?;
        out.sphere_mean_values.push(smv);
    }
    Ok(())
}

fn green_identities(p: &Params, out: &mut VerifySummary) -> Result<()> {
    let (so, ro) = identity_orders(p.n());
    let sphere = SphereRule::new(p.n(), so)?;
    for (cu, cv) in GREEN_PAIRS {
        let (u, v) = (cu.build(p)?, cv.build(p)?);
        let g = green_identity_residual(p, &u, &v, GREEN_RADIUS, None, &sphere, ro)?;
        out.checks.push(Check::below(format!("green_identity/{cu}/{cv}"), g.residual.abs(), GREEN_IDENTITY_TOL));
        out.green_identities.push(NamedGreenIdentity { u: cu.id().into(), v: cv.id().into(), identity: g });
    }
    let k = kernels::constants(p)?;
    let u = Case::OneMinusR2.build(p)?;
    let gf = green_field(&k);
    let g = green_identity_residual(p, &u, &gf, ANNULUS.1, Some(ANNULUS.0), &sphere, ro)?;
    out.checks.push(Check::below("green_identity_annulus/one-minus-r2/green", g.residual.abs(), ANNULUS_TOL));
    out.green_identities.push(NamedGreenIdentity { u: u.name().into(), v: "green".into(), identity: g });
    Ok(())
}

fn kernel_checks(p: &Params, out: &mut VerifySummary) -> Result<()> {
    let k = kernels::constants(p)?;
    let shell: Vec<_> = grid(p.n(), &[0.2, 0.35, 0.5, 0.65, 0.8]).into_iter().filter(|x| x.norm() > 0.0).collect();
    let gf = green_field(&k).field.fd_only();
    let worst = shell
        .iter()
        .map(|x| t_alpha_relative_residual(p, &gf, x.coords()))
        .fold(0.0, f64::max);
    out.checks.push(Check::below("t_alpha_green", worst, HARMONICITY_TOL));

    let slice = crate::corpus::poisson_slice(p, &crate::corpus::default_pole(p.n()))?.field.fd_only();
    let worst = shell
        .iter()
        .map(|x| t_alpha_relative_residual(p, &slice, x.coords()))
        .fold(0.0, f64::max);
    out.checks.push(Check::below("t_alpha_poisson", worst, HARMONICITY_TOL));

    let mut worst = 0.0f64;
    for i in 0..=80 {
        let s = 0.1 + 0.8 * i as f64 / 80.0;
        let r = kernels::radial_ode_residual(p, |t| kernels::green_profile_s(p, t), s, RADIAL_ODE_STEP)?;
        worst = worst.max(r.abs());
    }
    out.checks.push(Check::below("radial_ode", worst, RADIAL_ODE_TOL));
    Ok(())
}

/// Spread `max/min − 1` of a positive-or-negative constant sequence.
fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    (hi - lo).abs() / lo.abs().min(hi.abs())
}

fn hyperbolic_checks(p: &Params, levels: &[Level], out: &mut VerifySummary) -> Result<()> {
    let n = p.n();
    let k = kernels::constants(p)?;
    let zeta = crate::corpus::default_pole(n);
    let ratios: Vec<f64> = default_grid(n)
        .iter()
        .map(|x| kernels::poisson_kernel(&k, x.coords(), zeta.coords()) / kernels::poisson_szego(x.coords(), zeta.coords()))
        .collect();
    out.checks.push(Check::below("hyperbolic/poisson_ratio_spread", spread(&ratios), HYPERBOLIC_KERNEL_TOL));

    let ratios = (0..=40)
        .map(|i| {
            let r = 0.1 + 0.8 * i as f64 / 40.0;
            Ok(kernels::green_profile(&k, r)? / kernels::hyperbolic_g(n, r, 1.0)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    out.checks.push(Check::below("hyperbolic/green_ratio_spread", spread(&ratios), HYPERBOLIC_GREEN_TOL));

    let level = *levels.last().expect("at least one level");
    let solver = Solver::at_level(p, level)?;
    let hs = HyperbolicSolver::new(n, solver.sphere().clone(), solver.ball().clone())?;
    let u = Case::OneMinusR2.build(p)?;
    let field = u.field.clone();
    let phi = move |z: &[f64]| field.value(z);
    let t = u.t_alpha_fn();
    let t2 = t.clone();
    let psi = move |y: &[f64]| t(y);
    let psi_h = move |y: &[f64]| (1.0 - norm_sq(y)) * t2(y);
    let points = default_grid(n);
    let hv = hs.solve(&phi, &psi_h, &points)?;
    let prob = crate::solver::DirichletProblem {
        params: *p,
        phi: crate::solver::BoundaryData::Function(&phi),
        psi: Some(&psi),
        psi_bound_check: None,
    };
    let tv = solver.solve(&prob, &points)?;
    let diff = hv.iter().zip(&tv).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    out.checks.push(Check::below("hyperbolic/solver_agreement", diff, HYPERBOLIC_SOLVE_TOL));
    Ok(())
}

fn representations(p: &Params, cases: &[Case], levels: &[Level], out: &mut VerifySummary) -> Result<()> {
    let points = default_grid(p.n());
    let mut signs = Vec::new();
    for &case in cases {
        let u = case.build(p)?;
        let report = verify_representation(p, &u, &points, levels)?;
        out.checks.push(Check::below(format!("representation/{case}"), report.sup_error, REPRESENTATION_TOL));
        out.checks.push(Check::flag(format!("representation/{case}/monotone"), report.monotone));
        if report.sign_audit_outcome != 0.0 {
            signs.push(report.sign_audit_outcome);
        }
        out.representations.push(report);
    }
    let consistent = signs.iter().all(|&s| !s.is_nan() && s == signs[0]);
    out.checks.push(Check::flag("representation/sign_consistency", consistent));
    Ok(())
}

fn convergence_table(reports: &[VerifyReport]) -> Csv {
    let mut t = Csv::new(&["case", "order", "sup_error"]);
    for r in reports {
        for row in &r.convergence {
            t.row(vec![r.case.clone(), row.order.to_string(), num(row.sup_error)]);
        }
    }
    t
}

/// A group of `verify --all` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    MeanValue,
    Kernels,
    GreenIdentity,
    Representation,
    /// Only meaningful for `α = n − 2`.
    Hyperbolic,
}

/// The checks of one section, computed exactly as `verify --all` does.
pub fn section_checks(p: &Params, section: Section, levels: &[Level]) -> Result<Vec<Check>> {
    let mut summary = VerifySummary::default();
    match section {
        Section::MeanValue => mean_values(p, &mut summary)?,
        Section::Kernels => kernel_checks(p, &mut summary)?,
        Section::GreenIdentity => green_identities(p, &mut summary)?,
        Section::Representation => representations(p, &REPRESENTATION_CASES, levels, &mut summary)?,
        Section::Hyperbolic => hyperbolic_checks(p, levels, &mut summary)?,
    }
    Ok(summary.checks)
}

pub fn run(config: &RunConfig) -> std::result::Result<(), CliError> {
    let p = Params::new(config.n, config.alpha())?;
    let levels = config.verify.levels.clone().unwrap_or_else(|| Level::ladder(p.n()));
    let mut summary = VerifySummary::default();
    if config.verify.all {
        mean_values(&p, &mut summary)?;
        kernel_checks(&p, &mut summary)?;
        green_identities(&p, &mut summary)?;
        representations(&p, &REPRESENTATION_CASES, &levels, &mut summary)?;
        if p.is_hyperbolic() {
            hyperbolic_checks(&p, &levels, &mut summary)?;
        }
    } else if let Some(id) = &config.verify.case {
        let case: Case = id.parse()?;
        representations(&p, &[case], &levels, &mut summary)?;
    } else {
        return Err(CliError::Config("verify needs --all or --case".into()));
    }
    let mut sink = Sink::new(config)?;
    sink.csv("verify_checks.csv", &checks_csv(&summary.checks))?;
    sink.csv("verify_convergence.csv", &convergence_table(&summary.representations))?;
    sink.json("verify_report.json", &summary)?;
    for f in sink.written() {
        println!("wrote {}", f.display());
    }
    conclude(&summary.checks)
}
