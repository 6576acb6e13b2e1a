mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use talpha::quadrature::gauss::{composite_legendre, gauss_jacobi, gauss_legendre, graded_breaks, integrate_adaptive};
use talpha::quadrature::{from_csv, load_or_build_in, to_csv, BallRule, Grading, SphereRule};
use talpha::specfun::gamma;
use talpha::{ball_volume, sphere_area, SpherePoint};

/// `∫ Π xᵢ^{2kᵢ} dσ = Γ(n/2)/Γ(n/2 + Σk) · Π Γ(kᵢ + ½)/Γ(½)`.
fn even_moment(n: usize, k: &[u32]) -> f64 {
    let total: u32 = k.iter().sum();
    let nf = n as f64;
    let mut v = gamma(nf / 2.0).unwrap() / gamma(nf / 2.0 + total as f64).unwrap();
    for &ki in k {
        v *= gamma(ki as f64 + 0.5).unwrap() / PI.sqrt();
    }
    v
}

fn monomial(x: &[f64], k: &[u32]) -> f64 {
    x.iter().zip(k).map(|(xi, &ki)| xi.powi(2 * ki as i32)).product()
}

#[test]
fn product_rule_integrates_even_monomials() {
    for n in 2..=5 {
        let rule = SphereRule::new(n, 8).unwrap();
        let mut weights_total = 0.0;
        for w in rule.weights() {
            weights_total += w;
        }
        assert_relative_eq!(weights_total, 1.0, max_relative = 1e-13);
        let exps: [&[u32]; 4] = [&[1, 0, 0, 0, 0], &[2, 1, 0, 0, 0], &[1, 1, 1, 0, 0], &[3, 0, 2, 1, 0]];
        for k in exps {
            let k = &k[..n];
            let got = rule.integrate(|x| monomial(x, k));
            assert_relative_eq!(got, even_moment(n, k), max_relative = 1e-13);
        }
        // odd monomials vanish
        assert!(rule.integrate(|x| x[0] * x[1] * x[1]).abs() < 1e-15);
        assert!(rule.integrate(|x| x[n - 1].powi(3)).abs() < 1e-15);
    }
}

#[test]
fn polar_rule_integrates_monomials_about_any_pole() {
    for n in 3..=4 {
        let mut v = vec![0.3, -0.5, 0.8, 0.1];
        v.truncate(n);
        let pole = SpherePoint::normalize(&v).unwrap();
        let rule = SphereRule::with_grading(n, 12, Grading::POLAR).unwrap().with_pole(&pole).unwrap();
        let k = [2u32, 1, 1, 0];
        let got = rule.integrate(|x| monomial(x, &k[..n]));
        assert_relative_eq!(got, even_moment(n, &k[..n]), max_relative = 1e-11);
    }
}

#[test]
fn polar_rule_resolves_a_boundary_peak() {
    // ∫ (1 − r²)/|r e₃ − ζ|³ dσ = 1 on 𝕊² (the classical Poisson kernel)
    let pole = SpherePoint::axis(3, 2);
    let rule = SphereRule::with_grading(3, 24, Grading::POLAR).unwrap().with_pole(&pole).unwrap();
    for &r in &[0.9, 0.99, 0.999, 0.99999] {
        let got = rule.integrate(|z| {
            let d2 = z[0] * z[0] + z[1] * z[1] + (z[2] - r) * (z[2] - r);
            (1.0 - r * r) / d2.powf(1.5)
        });
        assert_relative_eq!(got, 1.0, max_relative = 1e-11);
    }
}

#[test]
fn zonal_integral_matches_one_dimensional_oracle() {
    let rule = SphereRule::new(3, 24).unwrap();
    let f = |t: f64| (2.0 * t).cos() * (1.0 + t * t).recip();
    let got = rule.integrate(|z| f(z[0]));
    assert_relative_eq!(got, common::zonal_mean_s2(f, 2000), max_relative = 1e-12);
}

#[test]
fn ball_rule_volume_and_moments() {
    for n in 3..=5 {
        for &rho in &[1.0, 0.7] {
            let ball = BallRule::ball(n, rho, 6, 6).unwrap();
            let vol = ball.integrate(|_| 1.0);
            assert_relative_eq!(vol, ball_volume(n) * rho.powi(n as i32), max_relative = 1e-13);
            let second = ball.integrate(|y| y.norm_sq());
            let want = sphere_area(n) * rho.powi(n as i32 + 2) / (n as f64 + 2.0);
            assert_relative_eq!(second, want, max_relative = 1e-13);
        }
        let ann = BallRule::annulus(n, 0.2, 0.9, 6, 6).unwrap();
        let want = ball_volume(n) * (0.9f64.powi(n as i32) - 0.2f64.powi(n as i32));
        assert_relative_eq!(ann.integrate(|_| 1.0), want, max_relative = 1e-12);
    }
}

#[test]
fn one_dimensional_rules() {
    // Gauss–Legendre with m nodes is exact through degree 2m − 1
    let gl = gauss_legendre(6).unwrap();
    assert_relative_eq!(gl.integrate(|t| t.powi(10)), 2.0 / 11.0, max_relative = 1e-14);
    // composite panels
    let comp = composite_legendre(&[0.0, 0.5, 1.0, 3.0], 8).unwrap();
    assert_relative_eq!(comp.integrate(|t| t.exp()), 3f64.exp() - 1.0, max_relative = 1e-14);
    let breaks = graded_breaks(1e-14, 4.0, 1.0);
    assert_eq!(breaks[0], 0.0);
    assert_eq!(*breaks.last().unwrap(), 1.0);
    assert!(breaks.windows(2).all(|w| w[1] > w[0]));
    let graded = composite_legendre(&breaks, 10).unwrap();
    assert_relative_eq!(graded.integrate(|t| t.powf(-0.5)), 2.0, max_relative = 1e-6);
    assert_relative_eq!(integrate_adaptive(|t| t.sqrt(), 0.0, 1.0, 1e-13).unwrap(), 2.0 / 3.0, max_relative = 1e-11);
    assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
    assert!(gauss_jacobi(4, -1.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn jacobi_mass_and_first_moment(a in -0.9..3.0f64, b in -0.9..3.0f64, order in 2usize..20) {
        let rule = gauss_jacobi(order, a, b).unwrap();
        // ∫(1−t)^a(1+t)^b dt = 2^{a+b+1} B(a+1, b+1)
        let beta = gamma(a + 1.0).unwrap() * gamma(b + 1.0).unwrap() / gamma(a + b + 2.0).unwrap();
        let mass = 2f64.powf(a + b + 1.0) * beta;
        prop_assert!((rule.integrate(|_| 1.0) / mass - 1.0).abs() < 1e-12);
        // mean of t under the weight is (b − a)/(a + b + 2)
        let mean = rule.integrate(|t| t) / mass;
        prop_assert!((mean - (b - a) / (a + b + 2.0)).abs() < 1e-12);
        prop_assert!(rule.nodes.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
    }
}

#[test]
fn cache_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    for grading in [Grading::Uniform, Grading::POLAR] {
        let built = SphereRule::with_grading(4, 6, grading).unwrap();
        let parsed = from_csv(&to_csv(&built), 4, 6, grading).unwrap();
        assert_eq!(built, parsed);
        let first = load_or_build_in(dir.path(), 4, 6, grading).unwrap();
        let second = load_or_build_in(dir.path(), 4, 6, grading).unwrap();
        assert_eq!(first, built);
        assert_eq!(second, built);
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    assert!(from_csv("garbage", 4, 6, Grading::Uniform).is_err());
}
