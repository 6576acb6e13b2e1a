mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use talpha::specfun::{
    gamma, hyp2f1, hyp2f1_at_one, hyp2f1_complement, hyp2f1_derivative, limit_ratio_at_one, ode_residual,
    solutions_at_one, HypParams,
};

fn hp(a: f64, b: f64, c: f64) -> HypParams {
    HypParams::new(a, b, c).unwrap()
}

/// Five-point central difference.
fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_high_precision_series(a in -5.0..5.0f64, b in -5.0..5.0f64, c in 0.5..6.0f64, z in -0.9..0.9f64) {
        let got = hyp2f1(&hp(a, b, c), z).unwrap();
        let want = common::hyp2f1_series(a, b, c, z);
        prop_assert!(common::rel_err(got, want) <= 1e-9, "F({a},{b};{c};{z}) = {got}, oracle {want}");
    }

    #[test]
    fn complement_argument_agrees(a in -3.0..3.0f64, b in -3.0..3.0f64, c in 0.5..5.0f64, z in -0.9..0.9f64) {
        let p = hp(a, b, c);
        let direct = hyp2f1(&p, z).unwrap();
        let via_w = hyp2f1_complement(&p, 1.0 - z).unwrap();
        prop_assert!((direct - via_w).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn euler_pair_about_one(a in -3.0..3.0f64, b in -3.0..3.0f64, c in 0.5..5.0f64, x in 0.05..0.95f64) {
        // (1−x)^{c−a−b} F(c−a, c−b; c+1−a−b; 1−x) = x^{1−c}(1−x)^{c−a−b} F(1−a, 1−b; c+1−a−b; 1−x)
        let m = c - a - b;
        let lower = 1.0 + m;
        prop_assume!(lower > 0.0 || (lower - lower.round()).abs() > 1e-3);
        let lhs = (1.0 - x).powf(m) * hyp2f1_complement(&hp(c - a, c - b, lower), x).unwrap();
        let rhs = x.powf(1.0 - c) * (1.0 - x).powf(m) * hyp2f1_complement(&hp(1.0 - a, 1.0 - b, lower), x).unwrap();
        prop_assert!(common::rel_err(lhs, rhs) <= 1e-9, "lhs {lhs}, rhs {rhs}");
    }

    #[test]
    fn contiguous_derivative(a in -3.0..3.0f64, b in -3.0..3.0f64, c in 1.05..5.0f64, x in 0.1..0.9f64) {
        // d/dx[x^{c−1} F(a,b;c;x)] = (c−1) x^{c−2} F(a,b;c−1;x)
        let p = hp(a, b, c);
        let lhs = derivative(|t| t.powf(c - 1.0) * hyp2f1(&p, t).unwrap(), x, 1e-3);
        let rhs = (c - 1.0) * x.powf(c - 2.0) * hyp2f1(&hp(a, b, c - 1.0), x).unwrap();
        let scale = x.powf(c - 2.0) * hyp2f1(&p, x).unwrap().abs();
        prop_assume!(rhs.abs() > 1e-3 * scale);
        prop_assert!(common::rel_err(lhs, rhs) <= 1e-6, "lhs {lhs}, rhs {rhs}");
    }

    #[test]
    fn derivative_matches_differences(a in -3.0..3.0f64, b in -3.0..3.0f64, c in 0.5..5.0f64, z in -0.8..0.8f64) {
        let p = hp(a, b, c);
        let fd = derivative(|t| hyp2f1(&p, t).unwrap(), z, 1e-3);
        let exact = hyp2f1_derivative(&p, z).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
    }
}

#[test]
fn gauss_value_four_over_pi() {
    let v = hyp2f1_at_one(&hp(0.5, 0.5, 2.0)).unwrap();
    assert!((v - 4.0 / PI).abs() <= 1e-10);
}

#[test]
fn gauss_value_is_the_limit_of_the_series() {
    let p = hp(0.3, -0.7, 1.9);
    let at_one = hyp2f1_at_one(&p).unwrap();
    let near = hyp2f1(&p, 1.0 - 1e-9).unwrap();
    assert_relative_eq!(at_one, near, max_relative = 1e-7);
}

#[test]
fn gauss_value_rejects_divergent_parameters() {
    assert!(hyp2f1_at_one(&hp(1.0, 1.5, 2.0)).is_err());
}

#[test]
fn limit_ratio_when_singular_at_one() {
    // c − a − b = −1/2 for (1, 1.5; 2): F ~ Γ(2)Γ(1/2)/(Γ(1)Γ(3/2)) (1−z)^{−1/2} = 2(1−z)^{−1/2}
    let p = hp(1.0, 1.5, 2.0);
    let l = limit_ratio_at_one(&p).unwrap();
    assert_relative_eq!(l, 2.0, max_relative = 1e-12);
    let w = 1e-8;
    let ratio = hyp2f1_complement(&p, w).unwrap() * w.sqrt();
    assert_relative_eq!(ratio, l, max_relative = 1e-3);
}

#[test]
fn elementary_closed_forms() {
    for &z in &[-0.9f64, -0.4, 0.0, 0.3, 0.7, 0.95] {
        // F(1,1;2;z) = −ln(1−z)/z
        let want = if z == 0.0 { 1.0 } else { -(1.0 - z).ln() / z };
        assert_relative_eq!(hyp2f1(&hp(1.0, 1.0, 2.0), z).unwrap(), want, max_relative = 1e-13);
        // F(a,b;b;z) = (1−z)^{−a}
        assert_relative_eq!(hyp2f1(&hp(0.7, 2.3, 2.3), z).unwrap(), (1.0 - z).powf(-0.7), max_relative = 1e-13);
        // F(1/2,1/2;3/2;z²) = arcsin(z)/z
        let want = if z == 0.0 { 1.0 } else { z.asin() / z };
        assert_relative_eq!(hyp2f1(&hp(0.5, 0.5, 1.5), z * z).unwrap(), want, max_relative = 1e-13);
    }
}

#[test]
fn integer_excess_near_one() {
    // c − a − b = 0 exercises the logarithmic branch: F(1/2,1/2;1;z) = 2K(√z)/π
    let z: f64 = 0.99;
    let k = (0..4000).map(|i| {
        let t = (i as f64 + 0.5) / 4000.0 * PI / 2.0;
        (1.0 - z * t.sin().powi(2)).powf(-0.5)
    });
    let elliptic_k = k.sum::<f64>() * PI / 2.0 / 4000.0;
    assert_relative_eq!(hyp2f1(&hp(0.5, 0.5, 1.0), z).unwrap(), 2.0 * elliptic_k / PI, max_relative = 1e-10);
}

#[test]
fn solutions_about_one_solve_the_ode() {
    let p = hp(0.4, 1.3, 1.1);
    for &z in &[0.2, 0.5, 0.8] {
        let r1 = ode_residual(&p, |t| Ok(solutions_at_one(&p, t)?.0), z, 1e-4).unwrap();
        let r2 = ode_residual(&p, |t| Ok(solutions_at_one(&p, t)?.1), z, 1e-4).unwrap();
        let f = ode_residual(&p, |t| hyp2f1(&p, t), z, 1e-4).unwrap();
        assert!(r1.abs() < 1e-5 && r2.abs() < 1e-5 && f.abs() < 1e-5, "{r1} {r2} {f}");
    }
}

#[test]
fn ode_residual_is_second_order_in_the_step() {
    let p = hp(0.4, 1.3, 1.1);
    let e1 = ode_residual(&p, |t| hyp2f1(&p, t), 0.4, 1e-2).unwrap().abs();
    let e2 = ode_residual(&p, |t| hyp2f1(&p, t), 0.4, 5e-3).unwrap().abs();
    let order = (e1 / e2).log2();
    assert!(order >= 1.8, "observed order {order}");
}

#[test]
fn gamma_values() {
    assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
    assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-14);
    assert_relative_eq!(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-14);
    // reflection Γ(x)Γ(1−x) = π/sin(πx)
    for &x in &[0.1, 0.37, 0.81] {
        assert_relative_eq!(gamma(x).unwrap() * gamma(1.0 - x).unwrap(), PI / (PI * x).sin(), max_relative = 1e-13);
    }
    assert!(gamma(-2.0).is_err());
}
