use serde::Serialize;

use super::config::RunConfig;
use super::output::{Csv, Sink};
use super::CliError;
use crate::kernels::{self, KernelConstants};
use crate::solver::{Level, Solver};
use crate::{BallPoint, Params, SpherePoint};

/// Orders used for the sign audit reported next to the constants.
const AUDIT_LEVEL: Level = Level { sphere_order: 16, radial_order: 16, ball_sphere_order: 8 };

#[derive(Debug, Serialize)]
struct KernelSummary {
    constants: KernelConstants,
    green_origin_coefficient: f64,
    k_alpha_limit: f64,
    rows: usize,
}

/// `(P_α(r e₁, e₁), G_α, RG_α, h_α, k_α)`; the pole at `r = 0` is reported as ±∞.
fn ray_row(k: &KernelConstants, r: f64) -> Result<[f64; 5], CliError> {
    let n = k.params.n();
    let e1 = SpherePoint::axis(n, 0);
    let x = BallPoint::on_axis(n, 0, r)?;
    let p = kernels::poisson_kernel(k, x.coords(), e1.coords());
    let ka = kernels::k_alpha(&k.params, r)?;
    if r == 0.0 {
        let g0 = kernels::green_origin_coefficient(k)?;
        let rg0 = kernels::green_derivative_origin_coefficient(k)?;
        let inf = |c: f64| c.signum() * f64::INFINITY;
        return Ok([p, inf(g0), inf(rg0), inf(k.d_alpha_paper), ka]);
    }
    Ok([
        p,
        kernels::green_radial(k, x.coords())?,
        kernels::green_radial_derivative(k, x.coords())?,
        kernels::h_alpha(k, r)?,
        ka,
    ])
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let p = Params::new(config.n, config.alpha())?;
    let solver = Solver::at_level(&p, AUDIT_LEVEL)?;
    let k = solver.constants().clone();
    let mut table = Csv::new(&["r", "P_alpha_center_ray", "G_alpha", "RG_alpha", "h_alpha", "k_alpha"]);
    let radii = config.kernel.ray.radii();
    for &r in &radii {
        let row = ray_row(&k, r)?;
        let mut values = vec![r];
        values.extend(row);
        table.numbers(&values);
    }
    let summary = KernelSummary {
        green_origin_coefficient: kernels::green_origin_coefficient(&k)?,
        k_alpha_limit: kernels::k_alpha_limit(&p)?,
        constants: k.clone(),
        rows: radii.len(),
    };
    let mut sink = Sink::new(config)?;
    sink.csv("kernel_ray.csv", &table)?;
    sink.json("kernel_constants.json", &summary)?;
    println!(
        "c_alpha_calibrated = {:.17e}, c_alpha_paper = {:.17e}, green sign {}",
        k.c_alpha_calibrated, k.c_alpha_paper, k.sign_audit.green_sign
    );
    for f in sink.written() {
        println!("wrote {}", f.display());
    }
    Ok(())
}
