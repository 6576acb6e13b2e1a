mod common;

use proptest::prelude::*;
use talpha::moebius::{
    boundary_residual, bracket, bracket_sq, conformal_factor, identity_residuals, moebius_map,
};
use talpha::{BallPoint, SpherePoint};

fn ball_point(n: usize, r: f64) -> impl Strategy<Value = BallPoint> {
    prop::collection::vec(-1.0..1.0f64, n)
        .prop_filter("away from the origin", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-6)
        .prop_flat_map(move |v| (Just(v), 0.0..r))
        .prop_map(|(v, t)| {
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            BallPoint::new(v.iter().map(|c| c / norm * t).collect()).unwrap()
        })
}

fn sphere_point(n: usize) -> impl Strategy<Value = SpherePoint> {
    prop::collection::vec(-1.0..1.0f64, n)
        .prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-6)
        .prop_map(|v| SpherePoint::normalize(&v).unwrap())
}

fn pair(r: f64) -> impl Strategy<Value = (BallPoint, BallPoint)> {
    (3usize..=5).prop_flat_map(move |n| (ball_point(n, r), ball_point(n, r)))
}

proptest! {
    #[test]
    fn identities_hold((x, y) in pair(0.9)) {
        for r in identity_residuals(&x, y.coords()) {
            prop_assert!(r < 1e-12, "{r}");
        }
    }

    #[test]
    fn matches_explicit_formula((x, y) in pair(0.95)) {
        let got = moebius_map(&x, y.coords());
        let want = common::moebius_reference(x.coords(), y.coords());
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-13);
        }
    }

    #[test]
    fn bracket_is_symmetric((x, y) in pair(1.0)) {
        let d = (bracket(x.coords(), y.coords()) - bracket(y.coords(), x.coords())).abs();
        prop_assert!(d < 1e-15);
        // [x,y]² = 1 + |x|²|y|² − 2⟨x,y⟩
        let xy: f64 = x.coords().iter().zip(y.coords()).map(|(a, b)| a * b).sum();
        let expanded = 1.0 + x.norm_sq() * y.norm_sq() - 2.0 * xy;
        prop_assert!((bracket_sq(x.coords(), y.coords()) - expanded).abs() < 1e-14);
    }

    #[test]
    fn boundary_maps_to_boundary(x in (3usize..=5).prop_flat_map(|n| (ball_point(n, 0.95), sphere_point(n)))) {
        prop_assert!(boundary_residual(&x.0, &x.1) < 1e-12);
    }

    #[test]
    fn swaps_center_and_origin(x in (3usize..=5).prop_flat_map(|n| ball_point(n, 0.95))) {
        let origin = vec![0.0; x.dim()];
        let image = moebius_map(&x, &origin);
        let back = moebius_map(&x, x.coords());
        for (a, b) in image.iter().zip(x.coords()) {
            prop_assert!((a - b).abs() < 1e-14);
        }
        prop_assert!(back.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn derivative_is_a_scaled_rotation((x, y) in pair(0.8), v in prop::collection::vec(-1.0..1.0f64, 5)) {
        // |Dφ_x(y) v| = |φ'_x(y)| |v| for every direction v
        let n = x.dim();
        let v = &v[..n];
        let h = 1e-6;
        let plus: Vec<f64> = y.coords().iter().zip(v).map(|(a, b)| a + h * b).collect();
        let minus: Vec<f64> = y.coords().iter().zip(v).map(|(a, b)| a - h * b).collect();
        let (fp, fm) = (moebius_map(&x, &plus), moebius_map(&x, &minus));
        let dv: f64 = fp.iter().zip(&fm).map(|(a, b)| ((a - b) / (2.0 * h)).powi(2)).sum::<f64>().sqrt();
        let vn: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assume!(vn > 1e-3);
        let factor = conformal_factor(&x, y.coords());
        prop_assert!((dv - factor * vn).abs() <= 1e-6 * factor * vn);
    }
}

#[test]
fn rejects_points_outside_the_ball() {
    assert!(BallPoint::new(vec![1.0, 0.0, 0.0]).is_err());
    assert!(BallPoint::new(vec![0.6, 0.6, 0.6]).is_err());
    assert!(SpherePoint::new(vec![0.5, 0.0, 0.0]).is_err());
    assert!(SpherePoint::normalize(&[0.0, 0.0, 0.0]).is_err());
}
