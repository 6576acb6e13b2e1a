use proptest::prelude::*;
use talpha::corpus::Case;
use talpha::operators::{
    conformal_invariance_residual, delta_gamma_apply, delta_h_apply, invariance_residual, t_alpha_apply,
    t_alpha_relative_residual,
};
use talpha::{BallPoint, Params, ScalarField};

fn point(n: usize, r: f64) -> impl Strategy<Value = BallPoint> {
    prop::collection::vec(-1.0..1.0f64, n)
        .prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-4)
        .prop_flat_map(move |v| (Just(v), 0.05..r))
        .prop_map(|(v, t)| {
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            BallPoint::new(v.iter().map(|c| c / norm * t).collect()).unwrap()
        })
}

fn setting() -> impl Strategy<Value = (Params, BallPoint)> {
    (3usize..=5, -0.9..3.0f64).prop_flat_map(|(n, a)| (Just(Params::new(n, a).unwrap()), point(n, 0.85)))
}

/// `u(x) = exp(x₁ − x₂/2) + x₃²`, a field with no special structure.
fn generic_field() -> ScalarField {
    ScalarField::new("generic", |x: &[f64]| (x[0] - 0.5 * x[1]).exp() + x[2] * x[2])
}

proptest! {
    #[test]
    fn one_minus_r2_closed_form((p, x) in setting()) {
        let u = Case::OneMinusR2.build(&p).unwrap();
        let s = x.norm_sq();
        let n = p.n() as f64;
        let a = p.alpha();
        let want = -2.0 * n * (1.0 - s) - 4.0 * a * s + (n - 2.0 - a) * a * (1.0 - s);
        let got = t_alpha_apply(&p, &u.field, x.coords());
        prop_assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()));
        prop_assert!((u.t_alpha(x.coords()) - want).abs() < 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn corpus_images_match_differences((p, x) in setting()) {
        for case in [Case::X1, Case::X1sqMinusX2sq, Case::OneMinusR2Squared, Case::MoebiusSlice] {
            let u = case.build(&p).unwrap();
            let fd = t_alpha_apply(&p, &u.field.fd_only(), x.coords());
            let exact = u.t_alpha(x.coords());
            let scale = 1.0 + exact.abs() + u.value(x.coords()).abs();
            prop_assert!((fd - exact).abs() < 1e-5 * scale, "{case}: fd {fd}, exact {exact}");
        }
    }

    #[test]
    fn harmonic_cases_are_annihilated((p, x) in setting()) {
        for case in [Case::PoissonSlice, Case::MoebiusSlice, Case::RadialHarmonic] {
            let u = case.build(&p).unwrap();
            let r = t_alpha_relative_residual(&p, &u.field.fd_only(), x.coords());
            prop_assert!(r < 1e-4, "{case}: {r}");
        }
    }

    #[test]
    fn t_alpha_is_a_rescaled_conformal_laplacian((p, x) in setting()) {
        // T_α = 4/(1 − |x|²) Δ_{α/2}
        let u = generic_field();
        let lhs = t_alpha_apply(&p, &u, x.coords());
        let rhs = 4.0 / (1.0 - x.norm_sq()) * delta_gamma_apply(p.alpha() / 2.0, &u, x.coords());
        prop_assert!((lhs - rhs).abs() < 1e-6 * (1.0 + lhs.abs()));
    }

    #[test]
    fn hyperbolic_laplacian_is_t_n_minus_2(x in (3usize..=5).prop_flat_map(|n| point(n, 0.9))) {
        let n = x.dim();
        let p = Params::new(n, n as f64 - 2.0).unwrap();
        let u = generic_field();
        let lhs = delta_h_apply(&u, x.coords());
        let rhs = (1.0 - x.norm_sq()) * t_alpha_apply(&p, &u, x.coords());
        prop_assert!((lhs - rhs).abs() < 1e-6 * (1.0 + lhs.abs()));
    }
}

#[test]
fn moebius_invariance() {
    for &(n, a) in &[(3, 0.0), (3, 0.5), (4, -0.5), (4, 2.0), (5, 1.0)] {
        let p = Params::new(n, a).unwrap();
        let u = Case::OneMinusR2Squared.build(&p).unwrap().field;
        let mut x = vec![0.0; n];
        x[0] = 0.3;
        x[1] = -0.2;
        let x = BallPoint::new(x).unwrap();
        let mut y = vec![0.0; n];
        y[1] = 0.4;
        y[2] = 0.1;
        let y = BallPoint::new(y).unwrap();
        let r = invariance_residual(&p, &u, &x, &y);
        let scale = 1.0 + t_alpha_apply(&p, &u, y.coords()).abs();
        assert!(r.abs() < 1e-5 * scale, "n={n} alpha={a}: {r}");
        let c = conformal_invariance_residual(a / 2.0, &u, &x, &y);
        assert!(c.abs() < 1e-5 * scale, "n={n} gamma={}: {c}", a / 2.0);
    }
}
