use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gauss::{composite_legendre, gauss_jacobi, graded_breaks};
use crate::moebius::SpherePoint;
use crate::{Error, Result};

/// How sphere nodes are distributed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Grading {
    /// Product rule: Gauss–Jacobi in the polar cosines, trapezoid in the azimuth.
    Uniform,
    /// Composite Gauss–Legendre in the polar angle θ from the pole `e₁`, with
    /// panels `[0, θ_min], [θ_min, θ_min·ratio], …, [·, 1], [1, 2], [2, π]`.
    Polar { theta_min: f64, ratio: f64 },
}

impl Grading {
    /// Default polar grading, resolving peaks of width down to about 1e−6 at the pole.
    pub const POLAR: Grading = Grading::Polar { theta_min: 1e-7, ratio: 4.0 };

    /// Short stable label used in cache keys.
    pub fn label(&self) -> String {
        match self {
            Grading::Uniform => "uniform".into(),
            Grading::Polar { theta_min, ratio } => format!("polar-{theta_min:e}-{ratio}"),
        }
    }
}

/// Nodes and weights for the normalized measure σ on 𝕊ⁿ⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    n: usize,
    order: usize,
    grading: Grading,
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
}

fn product_points(n: usize, order: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    if n == 2 {
        let m = 2 * order;
        return Ok((0..m)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / m as f64;
                (vec![phi.cos(), phi.sin()], 1.0 / m as f64)
            })
            .collect());
    }
    // ζ = (t, √(1−t²)·η), dσₙ ∝ (1−t²)^{(n−3)/2} dt dσₙ₋₁(η)
    let e = (n as f64 - 3.0) / 2.0;
    let t_rule = gauss_jacobi(order, e, e)?;
    let mass: f64 = t_rule.weights.iter().sum();
    let sub = product_points(n - 1, order)?;
    let mut out = Vec::with_capacity(order * sub.len());
    for (&t, &wt) in t_rule.nodes.iter().zip(&t_rule.weights) {
        let st = ((1.0 - t) * (1.0 + t)).sqrt();
        for (eta, we) in &sub {
            let mut p = Vec::with_capacity(n);
            p.push(t);
            p.extend(eta.iter().map(|c| st * c));
            out.push((p, wt / mass * we));
        }
    }
    Ok(out)
}

fn polar_points(n: usize, order: usize, theta_min: f64, ratio: f64) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut breaks = graded_breaks(theta_min, ratio, 1.0);
    breaks.extend([2.0, PI]);
    let theta = composite_legendre(&breaks, order)?;
    let sub = product_points(n - 1, order)?;
    let mut out = Vec::with_capacity(theta.len() * sub.len());
    for (&th, &wth) in theta.nodes.iter().zip(&theta.weights) {
        let (s, c) = th.sin_cos();
        let w = wth * s.powi(n as i32 - 2);
        for (eta, we) in &sub {
            let mut p = Vec::with_capacity(n);
            p.push(c);
            p.extend(eta.iter().map(|e| s * e));
            out.push((p, w * we));
        }
    }
    let total: f64 = out.iter().map(|p| p.1).sum();
    for p in &mut out {
        p.1 /= total;
    }
    Ok(out)
}

impl SphereRule {
    /// Product rule on 𝕊ⁿ⁻¹ with `order` polar nodes per angle and `2·order`
    /// azimuthal nodes; exact for polynomials of degree ≤ 2·order − 1.
    pub fn new(n: usize, order: usize) -> Result<Self> {
        SphereRule::with_grading(n, order, Grading::Uniform)
    }

    /// Rule with nodes refined toward the pole `e₁` ([`Grading::Polar`] needs `n ≥ 3`).
    pub fn with_grading(n: usize, order: usize, grading: Grading) -> Result<Self> {
        if n < 2 || order < 2 {
            return Err(Error::InvalidParams(format!(
                "sphere rule needs n >= 2 and order >= 2, got n = {n}, order = {order}"
            )));
        }
        let pts = match grading {
            Grading::Uniform => product_points(n, order)?,
            Grading::Polar { theta_min, ratio } => {
                if n < 3 || !(theta_min > 0.0 && theta_min < 1.0 && ratio > 1.0) {
                    return Err(Error::InvalidParams(format!("invalid polar grading {grading:?} for n = {n}")));
                }
                polar_points(n, order, theta_min, ratio)?
            }
        };
        let mut nodes = Vec::with_capacity(pts.len());
        let mut weights = Vec::with_capacity(pts.len());
        for (p, w) in pts {
            nodes.push(SpherePoint::normalize(&p)?);
            weights.push(w);
        }
        Ok(SphereRule { n, order, grading, nodes, weights })
    }

    pub(crate) fn from_parts(
        n: usize,
        order: usize,
        grading: Grading,
        nodes: Vec<SpherePoint>,
        weights: Vec<f64>,
    ) -> Self {
        SphereRule { n, order, grading, nodes, weights }
    }

    /// The same rule rotated so that `e₁` goes to `pole` (a Householder reflection).
    pub fn with_pole(&self, pole: &SpherePoint) -> Result<Self> {
        if pole.dim() != self.n {
            return Err(Error::InvalidParams(format!(
                "pole has dimension {} but the rule lives in dimension {}",
                pole.dim(),
                self.n
            )));
        }
        let z = pole.coords();
        let mut v = z.iter().map(|c| -c).collect::<Vec<_>>();
        v[0] += 1.0;
        let vv: f64 = v.iter().map(|c| c * c).sum();
        if vv < 1e-30 {
            return Ok(self.clone());
        }
        let nodes = self
            .nodes
            .iter()
            .map(|p| {
                let x = p.coords();
                let k = 2.0 * x.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / vv;
                SpherePoint::normalize(&x.iter().zip(&v).map(|(a, b)| a - k * b).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SphereRule { nodes, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn nodes(&self) -> &[SpherePoint] {
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

    /// `Σ wᵢ f(ζᵢ)` in node order.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(p.coords())).sum()
    }
}

/// `∫ f dσ` by `rule`; a failing or non-finite node value aborts with the node attached.
pub fn integrate_sphere<F>(rule: &SphereRule, f: F) -> Result<f64>
where
    F: Fn(&SpherePoint) -> Result<f64>,
{
    let mut sum = 0.0;
    for (index, (p, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let v = node_value(index, p.coords(), f(p))?;
        sum += w * v;
    }
    Ok(sum)
}

pub(crate) fn node_value(index: usize, point: &[f64], v: Result<f64>) -> Result<f64> {
    match v {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(Error::NodeEvaluation { index, point: point.to_vec(), message: format!("non-finite value {v}") }),
        Err(e) => Err(Error::NodeEvaluation { index, point: point.to_vec(), message: e.to_string() }),
    }
}
