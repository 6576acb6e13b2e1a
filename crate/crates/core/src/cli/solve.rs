use std::fs;
use std::path::Path;

use super::config::RunConfig;
use super::output::{num, read_table, Csv, Sink};
use super::CliError;
use crate::corpus::Case;
use crate::moebius::norm_sq;
use crate::quadrature::{cached_sphere_rule, BallRule, Grading, SphereRule};
use crate::solver::{grid, verify_representation, BoundaryData, DirichletProblem, HyperbolicSolver, Solver};
use crate::{BallPoint, Params};

fn coordinate_columns(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn write_nodes(path: &Path, rule: &SphereRule, config: &RunConfig) -> Result<(), CliError> {
    let mut cols = coordinate_columns(rule.dim());
    cols.push("weight".into());
    let mut t = Csv::new(&cols);
    for (z, w) in rule.nodes().iter().zip(rule.weights()) {
        let mut v = z.coords().to_vec();
        v.push(*w);
        t.numbers(&v);
    }
    fs::write(path, t.render(config)).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Boundary samples: one value per row (last column). When a row also carries
/// `n` coordinates they must match the rule's node.
fn read_samples(path: &Path, rule: &SphereRule) -> Result<Vec<f64>, CliError> {
    let n = rule.dim();
    let mut rows = read_table(path)?;
    if rows.first().is_some_and(|r| r.last().is_some_and(|c| c.parse::<f64>().is_err())) {
        rows.remove(0);
    }
    if rows.len() != rule.len() {
        return Err(crate::Error::NodeCountMismatch { expected: rule.len(), found: rows.len() }.into());
    }
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let parse = |c: &String| {
            c.parse::<f64>().map_err(|_| CliError::Config(format!("{}: row {i}: `{c}` is not a number", path.display())))
        };
        let cells = row.iter().map(parse).collect::<Result<Vec<f64>, _>>()?;
        match cells.len() {
            1 => {}
            k if k == n + 1 || k == n + 2 => {
                let z = rule.nodes()[i].coords();
                if cells[..n].iter().zip(z).any(|(a, b)| (a - b).abs() > 1e-9) {
                    return Err(CliError::Config(format!(
                        "{}: row {i} has coordinates {:?}, expected node {:?}",
                        path.display(),
                        &cells[..n],
                        z
                    )));
                }
            }
            k => return Err(CliError::Config(format!("{}: row {i} has {k} columns", path.display()))),
        }
        values.push(*cells.last().expect("nonempty row"));
    }
    Ok(values)
}

fn solution_table(n: usize, points: &[BallPoint], values: &[f64], exact: Option<&dyn Fn(&[f64]) -> f64>) -> Csv {
    let mut cols = coordinate_columns(n);
    cols.push("u".into());
    if exact.is_some() {
        cols.extend(["exact".into(), "error".into()]);
    }
    let mut t = Csv::new(&cols);
    for (x, &v) in points.iter().zip(values) {
        let mut row: Vec<String> = x.coords().iter().map(|&c| num(c)).collect();
        row.push(num(v));
        if let Some(f) = exact {
            let e = f(x.coords());
            row.push(num(e));
            row.push(num(v - e));
        }
        t.row(row);
    }
    t
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let sc = &config.solve;
    let p = Params::new(config.n, config.alpha())?;
    let points = grid(p.n(), &sc.grid_radii);
    if let Some(path) = &sc.nodes_csv {
        let solver = Solver::at_level(&p, sc.level)?;
        write_nodes(path, solver.sphere(), config)?;
        println!("wrote {}", path.display());
        if sc.case.is_none() && sc.phi_csv.is_none() {
            return Ok(());
        }
    }
    let mut sink = Sink::new(config)?;
    match (&sc.case, &sc.phi_csv) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either --case or --phi-csv, not both".into())),
        (None, None) => return Err(CliError::Config("solve needs --case or --phi-csv".into())),
        (Some(id), None) => {
            let case: Case = id.parse()?;
            let u = case.build(&p)?;
            if sc.hyperbolic {
                let sphere = cached_sphere_rule(p.n(), sc.level.sphere_order, Grading::Uniform)?;
                let ball_sphere = cached_sphere_rule(p.n(), sc.level.ball_sphere_order, Grading::Uniform)?;
                let hs = HyperbolicSolver::new(p.n(), sphere, BallRule::with_sphere(sc.level.radial_order, ball_sphere)?)?;
                let field = u.field.clone();
                let phi = move |z: &[f64]| field.value(z);
                let t = u.t_alpha_fn();
                let psi_h = move |y: &[f64]| (1.0 - norm_sq(y)) * t(y);
                let values = hs.solve(&phi, &psi_h, &points)?;
                let exact = |x: &[f64]| u.value(x);
                let sup = points.iter().zip(&values).map(|(x, v)| (v - exact(x.coords())).abs()).fold(0.0, f64::max);
                sink.csv("solve_solution.csv", &solution_table(p.n(), &points, &values, Some(&exact)))?;
                sink.json("solve_report.json", &serde_json::json!({ "case": case.id(), "kernels": "hyperbolic", "sup_error": sup }))?;
                println!("hyperbolic reconstruction of {case}: sup error {sup:e}");
            } else {
                let report = verify_representation(&p, &u, &points, &[sc.level])?;
                let values: Vec<f64> = report.residual_tables.iter().map(|r| r.computed).collect();
                let exact = |x: &[f64]| u.value(x);
                sink.csv("solve_solution.csv", &solution_table(p.n(), &points, &values, Some(&exact)))?;
                let mut conv = Csv::new(&["order", "sup_error", "runtime_seconds"]);
                for row in &report.convergence {
                    conv.row(vec![row.order.to_string(), num(row.sup_error), num(row.runtime_seconds)]);
                }
                sink.csv("solve_convergence.csv", &conv)?;
                sink.json("solve_report.json", &report)?;
                println!("reconstruction of {case}: sup error {:e}", report.sup_error);
            }
        }
        (None, Some(path)) => {
            if sc.hyperbolic {
                return Err(CliError::Config("the hyperbolic solve needs a manufactured case".into()));
            }
            let solver = Solver::at_level(&p, sc.level)?;
            let samples = read_samples(path, solver.sphere())?;
            let prob = DirichletProblem { params: p, phi: BoundaryData::Samples(samples), psi: None, psi_bound_check: None };
            let values = solver.solve(&prob, &points)?;
            sink.csv("solve_solution.csv", &solution_table(p.n(), &points, &values, None))?;
            sink.json(
                "solve_report.json",
                &serde_json::json!({ "boundary_data": path, "constants": solver.constants(), "points": points.len() }),
            )?;
        }
    }
    for f in sink.written() {
        println!("wrote {}", f.display());
    }
    Ok(())
}
