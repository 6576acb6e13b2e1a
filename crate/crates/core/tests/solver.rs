use talpha::corpus::{green_field, Case};
use talpha::kernels;
use talpha::moebius::moebius_map;
use talpha::quadrature::{BallRule, SphereRule};
use talpha::solver::{
    default_grid, green_identity_residual, grid, green_potential_direct, integrability_check, verify_representation,
    BoundaryData, DirichletProblem, HyperbolicSolver, Level, Solver,
};
use talpha::{BallPoint, Error, Params};

fn level(sphere: usize, radial: usize, ball_sphere: usize) -> Level {
    Level { sphere_order: sphere, radial_order: radial, ball_sphere_order: ball_sphere }
}

#[test]
fn coordinate_function_is_reproduced_by_the_poisson_integral() {
    // x₁ is T₀-harmonic, so P₀[ζ₁] = x₁
    let p = Params::new(3, 0.0).unwrap();
    let solver = Solver::at_level(&p, level(32, 8, 8)).unwrap();
    for x in default_grid(3) {
        let v = solver.poisson_integral(&|z: &[f64]| z[0], &x).unwrap();
        assert!((v - x.coords()[0]).abs() < 1e-5, "{:?}: {v}", x.coords());
    }
}

#[test]
fn sampled_and_functional_boundary_data_agree() {
    let p = Params::new(3, 0.5).unwrap();
    let solver = Solver::at_level(&p, level(16, 8, 8)).unwrap();
    let phi = |z: &[f64]| z[0] * z[0] - z[1] * z[1] + z[2];
    let samples: Vec<f64> = solver.sphere().nodes().iter().map(|z| phi(z.coords())).collect();
    let points = grid(3, &[0.2, 0.4]);
    let with_fn = DirichletProblem { params: p, phi: BoundaryData::Function(&phi), psi: None, psi_bound_check: None };
    let with_samples =
        DirichletProblem { params: p, phi: BoundaryData::Samples(samples.clone()), psi: None, psi_bound_check: None };
    let a = solver.solve(&with_fn, &points).unwrap();
    let b = solver.solve(&with_samples, &points).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }

    let short = DirichletProblem {
        params: p,
        phi: BoundaryData::Samples(samples[1..].to_vec()),
        psi: None,
        psi_bound_check: None,
    };
    assert!(matches!(solver.solve(&short, &points), Err(Error::NodeCountMismatch { .. })));
}

#[test]
fn manufactured_solutions_converge() {
    let p = Params::new(3, 0.5).unwrap();
    let points = default_grid(3);
    let levels = [level(16, 8, 8), level(32, 16, 16)];
    for case in [Case::OneMinusR2, Case::X1sqMinusX2sq] {
        let u = case.build(&p).unwrap();
        let report = verify_representation(&p, &u, &points, &levels).unwrap();
        assert!(report.sup_error < 1e-3, "{case}: {}", report.sup_error);
        assert!(report.monotone, "{case}: {:?}", report.convergence);
        assert_eq!(report.sign_audit_outcome, 1.0);
    }
}

#[test]
fn center_mean_value_identity() {
    for &(n, a) in &[(3, 0.0), (3, 1.0), (4, 0.5)] {
        let p = Params::new(n, a).unwrap();
        let solver = Solver::at_level(&p, level(16, 16, 8)).unwrap();
        for case in [Case::OneMinusR2, Case::MoebiusSlice] {
            let mv = solver.mean_value_center(&case.build(&p).unwrap()).unwrap();
            assert!(mv.rel_error < 1e-6, "n={n} alpha={a} {case}: {}", mv.rel_error);
        }
    }
}

#[test]
fn weighted_green_identity() {
    let p = Params::new(3, 0.5).unwrap();
    let sphere = SphereRule::new(3, 16).unwrap();
    let u = Case::X1.build(&p).unwrap();
    let v = Case::OneMinusR2Squared.build(&p).unwrap();
    let g = green_identity_residual(&p, &u, &v, 0.7, None, &sphere, 16).unwrap();
    assert!(g.residual.abs() < 1e-8, "{g:?}");
    // the annulus form with a singular v
    let k = kernels::constants(&p).unwrap();
    let one = Case::OneMinusR2.build(&p).unwrap();
    let g = green_identity_residual(&p, &one, &green_field(&k), 0.8, Some(0.1), &sphere, 16).unwrap();
    assert!(g.residual.abs() < 1e-8, "{g:?}");
}

#[test]
fn green_potential_is_symmetric_under_the_pullback() {
    // the direct Green quadrature at x agrees with the pulled-back one used by the solver
    let p = Params::new(3, 0.5).unwrap();
    let solver = Solver::at_level(&p, level(16, 24, 16)).unwrap();
    let psi = |y: &[f64]| 1.0 - y.iter().map(|c| c * c).sum::<f64>();
    let x = BallPoint::new(vec![0.2, -0.1, 0.3]).unwrap();
    let pulled = solver.green_potential(&psi, &x).unwrap();
    let fine = BallRule::new(3, 48, 32).unwrap();
    let (direct, _) = green_potential_direct(solver.constants(), &psi, &x, &fine).unwrap();
    assert!((pulled - direct).abs() < 1e-3 * direct.abs(), "{pulled} vs {direct}");
}

#[test]
fn integrability_of_sources() {
    let ball = BallRule::new(3, 8, 8).unwrap();
    let smooth = integrability_check(&|y: &[f64]| y[0] * y[0], &ball).unwrap();
    assert!(smooth.integrable);
    let singular = integrability_check(&|y: &[f64]| (1.0 - y.iter().map(|c| c * c).sum::<f64>()).powf(-1.5), &ball).unwrap();
    assert!(!singular.integrable);
}

#[test]
fn hyperbolic_assembly_matches_weighted_solver() {
    let p = Params::new(3, 1.0).unwrap();
    let solver = Solver::at_level(&p, level(16, 8, 8)).unwrap();
    let hs = HyperbolicSolver::new(3, solver.sphere().clone(), solver.ball().clone()).unwrap();
    let u = Case::OneMinusR2Squared.build(&p).unwrap();
    let field = u.field.clone();
    let phi = move |z: &[f64]| field.value(z);
    let t = u.t_alpha_fn();
    let t2 = t.clone();
    let psi = move |y: &[f64]| t(y);
    let psi_h = move |y: &[f64]| (1.0 - y.iter().map(|c| c * c).sum::<f64>()) * t2(y);
    let points = default_grid(3);
    let h = hs.solve(&phi, &psi_h, &points).unwrap();
    let prob = DirichletProblem { params: p, phi: BoundaryData::Function(&phi), psi: Some(&psi), psi_bound_check: None };
    let w = solver.solve(&prob, &points).unwrap();
    for ((a, b), x) in h.iter().zip(&w).zip(&points) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b} at {:?}", x.coords());
    }
}

#[test]
fn hyperbolic_solver_needs_matching_dimensions() {
    let sphere = SphereRule::new(3, 4).unwrap();
    let ball = BallRule::new(4, 4, 4).unwrap();
    assert!(HyperbolicSolver::new(3, sphere, ball).is_err());
}

#[test]
fn moebius_pullback_keeps_points_inside() {
    let x = BallPoint::new(vec![0.5, 0.5, 0.5]).unwrap();
    for y in default_grid(3) {
        let img = moebius_map(&x, y.coords());
        assert!(img.iter().map(|c| c * c).sum::<f64>() < 1.0);
    }
}
