//! The weighted Laplacians on scalar fields:
//!
//! ```text
//! T_α u = (1 − |x|²) Δu + 2α Ru + (n − 2 − α) α u
//! Δ_γ u = (1 − |x|²) { (1 − |x|²)/4 Δu + γ Ru + γ (n/2 − 1 − γ) u }
//! Δ_h u = (1 − |x|²)² Δu + 2(n − 2)(1 − |x|²) Ru
//! ```
//!
//! with `Ru = ⟨x, ∇u⟩`. Derivatives come from the field when it carries them and
//! from central differences otherwise.

use std::fmt;
use std::sync::Arc;

use crate::moebius::{bracket, norm_sq, BallPoint, Moebius};
use crate::Params;

pub type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-4;
/// Beyond this radius finite differences are Richardson-refined once.
pub const RICHARDSON_RADIUS: f64 = 0.9;

/// A real function on the ball, optionally with analytic gradient and Laplacian.
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    value: ValueFn,
    gradient: Option<GradientFn>,
    laplacian: Option<ValueFn>,
    fd_step: f64,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("gradient", &self.gradient.is_some())
            .field("laplacian", &self.laplacian.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl ScalarField {
    pub fn new<F>(name: impl Into<String>, value: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        ScalarField { name: name.into(), value: Arc::new(value), gradient: None, laplacian: None, fd_step: FD_STEP }
    }

    pub fn with_gradient<G>(mut self, gradient: G) -> Self
    where
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_laplacian<L>(mut self, laplacian: L) -> Self
    where
        L: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.laplacian = Some(Arc::new(laplacian));
        self
    }

    pub fn with_fd_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }

    /// The same values with analytic derivatives dropped.
    pub fn fd_only(&self) -> Self {
        ScalarField { gradient: None, laplacian: None, ..self.clone() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn has_laplacian(&self) -> bool {
        self.laplacian.is_some()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match &self.gradient {
            Some(g) => g(x),
            None => self.fd_gradient(x),
        }
    }

    pub fn laplacian(&self, x: &[f64]) -> f64 {
        match &self.laplacian {
            Some(l) => l(x),
            None => self.fd_laplacian(x),
        }
    }

    fn check_step(&self, x: &[f64]) -> bool {
        let r = norm_sq(x).sqrt();
        if 1.0 - r < 2.0 * self.fd_step {
            log::warn!(
                "finite-difference step {} too large at |x| = {r}: stencil leaves the ball",
                self.fd_step
            );
        }
        r > RICHARDSON_RADIUS
    }

    fn richardson<F: Fn(f64) -> f64>(&self, x: &[f64], d: F) -> f64 {
        if self.check_step(x) {
            let h = self.fd_step;
            (4.0 * d(h / 2.0) - d(h)) / 3.0
        } else {
            d(self.fd_step)
        }
    }

    /// Central-difference gradient.
    pub fn fd_gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..x.len())
            .map(|i| {
                self.richardson(x, |h| {
                    let mut p = x.to_vec();
                    p[i] += h;
                    let fp = self.value(&p);
                    p[i] = x[i] - h;
                    (fp - self.value(&p)) / (2.0 * h)
                })
            })
            .collect()
    }

    /// Central-difference Hessian, row-major `n × n`.
    pub fn fd_hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let f0 = self.value(x);
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let d = self.richardson(x, |h| {
                    let mut p = x.to_vec();
                    if i == j {
                        p[i] = x[i] + h;
                        let fp = self.value(&p);
                        p[i] = x[i] - h;
                        (fp - 2.0 * f0 + self.value(&p)) / (h * h)
                    } else {
                        let mut at = |si: f64, sj: f64| {
                            p[i] = x[i] + si * h;
                            p[j] = x[j] + sj * h;
                            self.value(&p)
                        };
                        (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h)
                    }
                });
                hess[i * n + j] = d;
                hess[j * n + i] = d;
            }
        }
        hess
    }

    /// Central-difference Laplacian.
    pub fn fd_laplacian(&self, x: &[f64]) -> f64 {
        self.richardson(x, |h| {
            let f0 = self.value(x);
            let mut p = x.to_vec();
            let mut sum = 0.0;
            for i in 0..x.len() {
                p[i] = x[i] + h;
                let fp = self.value(&p);
                p[i] = x[i] - h;
                let fm = self.value(&p);
                p[i] = x[i];
                sum += fp - 2.0 * f0 + fm;
            }
            sum / (h * h)
        })
    }
}

/// `Ru(x) = ⟨x, ∇u(x)⟩`.
pub fn radial_derivative(u: &ScalarField, x: &[f64]) -> f64 {
    u.gradient(x).iter().zip(x).map(|(g, c)| g * c).sum()
}

/// `T_α u(x)`.
pub fn t_alpha_apply(p: &Params, u: &ScalarField, x: &[f64]) -> f64 {
    let s = norm_sq(x);
    (1.0 - s) * u.laplacian(x) + 2.0 * p.alpha() * radial_derivative(u, x) + p.zeroth_order() * u.value(x)
}

/// `|T_α u(x)|` relative to the local scale
/// `(1−|x|²) √n ‖D²u‖_F + 2|α| Σ|xᵢ ∂ᵢu| + |(n−2−α)α u|`, which bounds each term of
/// `T_α u` and does not vanish when they cancel. The Hessian comes from central differences.
pub fn t_alpha_relative_residual(p: &Params, u: &ScalarField, x: &[f64]) -> f64 {
    let w = 1.0 - norm_sq(x);
    let grad = u.gradient(x);
    let v = u.value(x);
    let t = w * u.laplacian(x) + 2.0 * p.alpha() * grad.iter().zip(x).map(|(g, c)| g * c).sum::<f64>()
        + p.zeroth_order() * v;
    let frobenius = u.fd_hessian(x).iter().map(|d| d * d).sum::<f64>().sqrt();
    let scale = w * (x.len() as f64).sqrt() * frobenius
        + 2.0 * p.alpha().abs() * grad.iter().zip(x).map(|(g, c)| (g * c).abs()).sum::<f64>()
        + (p.zeroth_order() * v).abs();
    t.abs() / scale
}

/// `Δ_γ u(x)` in dimension `x.len()`.
pub fn delta_gamma_apply(gamma: f64, u: &ScalarField, x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let w = 1.0 - norm_sq(x);
    w * (w / 4.0 * u.laplacian(x) + gamma * radial_derivative(u, x) + gamma * (n / 2.0 - 1.0 - gamma) * u.value(x))
}

/// Hyperbolic Laplacian `Δ_h u(x)`.
pub fn delta_h_apply(u: &ScalarField, x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let w = 1.0 - norm_sq(x);
    w * w * u.laplacian(x) + 2.0 * (n - 2.0) * w * radial_derivative(u, x)
}

/// `y ↦ [x,y]^{α+2−n} u(φ_x(y))`, the Möbius transport of `u` that `T_α` intertwines.
pub fn moebius_transport(p: &Params, u: &ScalarField, x: &BallPoint) -> ScalarField {
    let m = Moebius::new(x);
    let e = p.alpha() + 2.0 - p.nf();
    let xc = x.coords().to_vec();
    let inner = u.clone();
    ScalarField::new(format!("transport of {}", u.name()), move |y: &[f64]| {
        bracket(&xc, y).powf(e) * inner.value(&m.apply(y))
    })
    .with_fd_step(u.fd_step())
}

/// `T_α{[x,·]^{α+2−n} u∘φ_x}(y) − (1−|x|²)[x,y]^{α−n} (T_α u)(φ_x(y))`, the left side by
/// finite differences in `y`.
pub fn invariance_residual(p: &Params, u: &ScalarField, x: &BallPoint, y: &BallPoint) -> f64 {
    let lhs = t_alpha_apply(p, &moebius_transport(p, u, x), y.coords());
    let img = moebius_map_point(x, y);
    let rhs = x.one_minus_norm_sq() * bracket(x.coords(), y.coords()).powf(p.alpha() - p.nf())
        * t_alpha_apply(p, u, &img);
    lhs - rhs
}

/// `Δ_γ{|φ'_x|^{(n−2−2γ)/2} u∘φ_x}(y) − |φ'_x(y)|^{(n−2−2γ)/2} (Δ_γ u)(φ_x(y))`,
/// the left side by finite differences in `y`.
pub fn conformal_invariance_residual(gamma: f64, u: &ScalarField, x: &BallPoint, y: &BallPoint) -> f64 {
    let n = x.dim() as f64;
    let e = (n - 2.0 - 2.0 * gamma) / 2.0;
    let m = Moebius::new(x);
    let xp = x.clone();
    let inner = u.clone();
    let lifted = ScalarField::new("conformal transport", move |z: &[f64]| {
        crate::moebius::conformal_factor(&xp, z).powf(e) * inner.value(&m.apply(z))
    })
    .with_fd_step(u.fd_step());
    let lhs = delta_gamma_apply(gamma, &lifted, y.coords());
    let img = moebius_map_point(x, y);
    let rhs = crate::moebius::conformal_factor(x, y.coords()).powf(e) * delta_gamma_apply(gamma, u, &img);
    lhs - rhs
}

fn moebius_map_point(x: &BallPoint, y: &BallPoint) -> Vec<f64> {
    Moebius::new(x).apply(y.coords())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> ScalarField {
        ScalarField::new("x1", |x: &[f64]| x[0])
    }

    fn one_minus_r2() -> ScalarField {
        ScalarField::new("1-|x|^2", |x: &[f64]| 1.0 - norm_sq(x))
    }

    #[test]
    fn radial_derivative_examples() {
        let c = ScalarField::new("one", |_: &[f64]| 1.0);
        assert!(radial_derivative(&c, &[0.3, 0.2, 0.1]).abs() < 1e-12);
        let s = ScalarField::new("r2", |x: &[f64]| norm_sq(x));
        let x = [0.3, 0.2, 0.1];
        assert!((radial_derivative(&s, &x) - 2.0 * norm_sq(&x)).abs() < 1e-8);
        assert!((radial_derivative(&x1(), &[0.5, 0.0, 0.0]) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn t_alpha_examples() {
        let p = Params::new(3, 1.0).unwrap();
        assert!((t_alpha_apply(&p, &x1(), &[0.5, 0.0, 0.0]) - 1.0).abs() < 1e-7);
        assert!((t_alpha_apply(&p, &one_minus_r2(), &[0.0; 3]) + 6.0).abs() < 1e-6);
        let c = ScalarField::new("one", |_: &[f64]| 1.0);
        let q = Params::new(4, 0.5).unwrap();
        assert!((t_alpha_apply(&q, &c, &[0.1, 0.2, 0.0, 0.3]) - q.zeroth_order()).abs() < 1e-9);
    }

    #[test]
    fn delta_gamma_and_h_examples() {
        let x = [0.5, 0.0, 0.0];
        assert!((delta_gamma_apply(0.5, &x1(), &x) - 0.1875).abs() < 1e-8);
        assert!((delta_h_apply(&x1(), &x) - 0.75).abs() < 1e-8);
        let c = ScalarField::new("one", |_: &[f64]| 1.0);
        assert!(delta_gamma_apply(0.0, &c, &x).abs() < 1e-9);
        assert!(delta_h_apply(&c, &x).abs() < 1e-9);
    }

    #[test]
    fn invariance_at_origin_center() {
        let p = Params::new(3, 0.5).unwrap();
        let u = ScalarField::new("poly", |x: &[f64]| x[0] * x[1] + x[2] * x[2] * x[2]);
        let y = BallPoint::new(vec![0.2, -0.3, 0.1]).unwrap();
        let r = invariance_residual(&p, &u, &BallPoint::origin(3), &y);
        assert!(r.abs() < 1e-6, "{r}");
    }
}
