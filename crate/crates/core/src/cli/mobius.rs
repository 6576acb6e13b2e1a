use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::RunConfig;
use super::output::{num, Csv, Sink};
use super::{conclude, Check, CliError};
use crate::moebius::{boundary_residual, identity_residuals};
use crate::{BallPoint, SpherePoint};

pub const IDENTITY_TOL: f64 = 1e-12;
/// Sample points stay in the ball of this radius.
const SAMPLE_RADIUS: f64 = 0.9;
const BOUNDARY_SAMPLES: usize = 200;
const IDENTITIES: [&str; 4] = ["involution", "complement", "bracket", "boundary"];

#[derive(Debug, Serialize)]
struct DimensionResult {
    n: usize,
    pairs: usize,
    /// Worst residual per identity, in the order of `identities`.
    max_residuals: [f64; 4],
}

#[derive(Debug, Serialize)]
struct SelfTest {
    identities: [&'static str; 4],
    tolerance: f64,
    dimensions: Vec<DimensionResult>,
}

fn cube_sample(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn ball_sample(rng: &mut ChaCha8Rng, n: usize) -> BallPoint {
    loop {
        let v = cube_sample(rng, n);
        if v.iter().map(|c| c * c).sum::<f64>() < 1.0 {
            let scaled = v.iter().map(|c| c * SAMPLE_RADIUS).collect();
            return BallPoint::new(scaled).expect("inside the ball");
        }
    }
}

fn sphere_sample(rng: &mut ChaCha8Rng, n: usize) -> SpherePoint {
    loop {
        let v = cube_sample(rng, n);
        let r2: f64 = v.iter().map(|c| c * c).sum();
        if r2 > 1e-4 && r2 < 1.0 {
            return SpherePoint::normalize(&v).expect("nonzero vector");
        }
    }
}

fn run_dimension(n: usize, pairs: usize, rng: &mut ChaCha8Rng) -> DimensionResult {
    let mut worst = [0.0f64; 4];
    for _ in 0..pairs {
        let x = ball_sample(rng, n);
        let y = ball_sample(rng, n);
        for (w, r) in worst.iter_mut().zip(identity_residuals(&x, y.coords())) {
            *w = w.max(r);
        }
    }
    for _ in 0..BOUNDARY_SAMPLES {
        let x = ball_sample(rng, n);
        let zeta = sphere_sample(rng, n);
        worst[3] = worst[3].max(boundary_residual(&x, &zeta));
    }
    DimensionResult { n, pairs, max_residuals: worst }
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let mc = &config.mobius;
    if !mc.self_test {
        return Err(CliError::Config("mobius needs --self-test".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
    let dimensions: Vec<DimensionResult> = mc.dims.iter().map(|&n| run_dimension(n, mc.pairs, &mut rng)).collect();
    let mut table = Csv::new(&["n", "identity", "max_residual", "tolerance", "passed"]);
    let mut checks = Vec::new();
    for d in &dimensions {
        for (name, &r) in IDENTITIES.iter().zip(&d.max_residuals) {
            let check = Check::below(format!("mobius/n={}/{name}", d.n), r, IDENTITY_TOL);
            table.row(vec![d.n.to_string(), name.to_string(), num(r), num(IDENTITY_TOL), check.passed.to_string()]);
            checks.push(check);
        }
    }
    let mut sink = Sink::new(config)?;
    sink.csv("mobius_self_test.csv", &table)?;
    sink.json("mobius_self_test.json", &SelfTest { identities: IDENTITIES, tolerance: IDENTITY_TOL, dimensions })?;
    for f in sink.written() {
        println!("wrote {}", f.display());
    }
    conclude(&checks)
}
