use serde::Serialize;

use super::gauss::{composite_legendre, Rule1d};
use super::sphere::{node_value, SphereRule};
use crate::moebius::BallPoint;
use crate::params::sphere_area;
use crate::{Error, Result};

/// Radial panel breaks of the unit-ball rule, as fractions of the radius.
pub const RADIAL_BREAKS: [f64; 5] = [0.0, 1e-3, 0.1, 0.9, 1.0];

/// Tensor rule for Lebesgue measure on a ball `ρ𝔹ⁿ` or an annulus `ρ𝔹ⁿ ∖ ε𝔹ⁿ`.
///
/// Nodes are ordered radius-major: node `k` sits at radius index `k / sphere.len()`.
#[derive(Debug, Clone, Serialize)]
pub struct BallRule {
    n: usize,
    inner: f64,
    outer: f64,
    radial_order: usize,
    sphere_order: usize,
    breaks: Vec<f64>,
    #[serde(skip)]
    radii: Vec<f64>,
    #[serde(skip)]
    radial_weights: Vec<f64>,
    #[serde(skip)]
    sphere: SphereRule,
    #[serde(skip)]
    nodes: Vec<BallPoint>,
    #[serde(skip)]
    weights: Vec<f64>,
}

impl BallRule {
    /// Rule on the unit ball with `radial_order` Gauss nodes per radial panel.
    pub fn new(n: usize, radial_order: usize, sphere_order: usize) -> Result<Self> {
        BallRule::ball(n, 1.0, radial_order, sphere_order)
    }

    /// Rule on `ρ𝔹ⁿ`, `0 < ρ ≤ 1`.
    pub fn ball(n: usize, rho: f64, radial_order: usize, sphere_order: usize) -> Result<Self> {
        BallRule::build_scaled(SphereRule::new(n, sphere_order)?, rho, radial_order)
    }

    /// Rule on the annulus `ε < |y| < ρ`.
    pub fn annulus(n: usize, eps: f64, rho: f64, radial_order: usize, sphere_order: usize) -> Result<Self> {
        BallRule::annulus_with_sphere(SphereRule::new(n, sphere_order)?, eps, rho, radial_order)
    }

    /// Tensor of the radial panels on the unit ball with a caller-supplied sphere rule.
    pub fn with_sphere(radial_order: usize, sphere: SphereRule) -> Result<Self> {
        BallRule::build_scaled(sphere, 1.0, radial_order)
    }

    /// Rule on `ρ𝔹ⁿ` with a caller-supplied sphere rule.
    pub fn build_scaled(sphere: SphereRule, rho: f64, radial_order: usize) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidParams(format!("ball radius {rho} must lie in (0, 1]")));
        }
        let breaks: Vec<f64> = RADIAL_BREAKS.iter().map(|b| b * rho).collect();
        BallRule::build(sphere.dim(), 0.0, rho, breaks, radial_order, sphere)
    }

    /// Rule on `ε < |y| < ρ` with a caller-supplied sphere rule.
    pub fn annulus_with_sphere(sphere: SphereRule, eps: f64, rho: f64, radial_order: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < rho && rho <= 1.0) {
            return Err(Error::InvalidParams(format!("annulus radii ({eps}, {rho}) must satisfy 0 < eps < rho <= 1")));
        }
        let breaks: Vec<f64> = [0.0, 0.1, 0.9, 1.0].iter().map(|b| eps + b * (rho - eps)).collect();
        BallRule::build(sphere.dim(), eps, rho, breaks, radial_order, sphere)
    }

    fn build(
        n: usize,
        inner: f64,
        outer: f64,
        breaks: Vec<f64>,
        radial_order: usize,
        sphere: SphereRule,
    ) -> Result<Self> {
        if radial_order < 2 {
            return Err(Error::InvalidParams(format!("radial order {radial_order} must be at least 2")));
        }
        let Rule1d { nodes: radii, weights: rw } = composite_legendre(&breaks, radial_order)?;
        let area = sphere_area(n);
        let radial_weights: Vec<f64> =
            radii.iter().zip(&rw).map(|(r, w)| w * area * r.powi(n as i32 - 1)).collect();
        let mut nodes = Vec::with_capacity(radii.len() * sphere.len());
        let mut weights = Vec::with_capacity(radii.len() * sphere.len());
        for (&r, &wr) in radii.iter().zip(&radial_weights) {
            for (z, &wz) in sphere.nodes().iter().zip(sphere.weights()) {
                nodes.push(BallPoint::scaled(z, r)?);
                weights.push(wr * wz);
            }
        }
        Ok(BallRule {
            n,
            inner,
            outer,
            radial_order,
            sphere_order: sphere.order(),
            breaks,
            radii,
            radial_weights,
            sphere,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn sphere_order(&self) -> usize {
        self.sphere_order
    }

    /// Radial panel breaks.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// Radial nodes.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Radial weights, including `r^{n−1}` and the sphere area.
    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn sphere(&self) -> &SphereRule {
        &self.sphere
    }

    pub fn nodes(&self) -> &[BallPoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Radius index of node `k`.
    pub fn radial_index(&self, k: usize) -> usize {
        k / self.sphere.len()
    }

    /// `Σ wₖ f(yₖ)` in node order.
    pub fn integrate<F: Fn(&BallPoint) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// `∫ f dV` by `rule`; a failing or non-finite node value aborts with the node attached.
pub fn integrate_ball<F>(rule: &BallRule, f: F) -> Result<f64>
where
    F: Fn(&BallPoint) -> Result<f64>,
{
    let mut sum = 0.0;
    for (index, (p, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        sum += w * node_value(index, p.coords(), f(p))?;
    }
    Ok(sum)
}
