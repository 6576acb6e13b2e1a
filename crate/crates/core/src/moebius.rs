//! Points of the unit ball and sphere, the bracket `[x,a]`, and the Möbius
//! involutions
//!
//! ```text
//! φ_a(x) = (|x − a|² a − (1 − |a|²)(x − a)) / [x,a]²
//! ```
//!
//! The bracket is evaluated as `[x,a]² = |x − a|² + (1 − |x|²)(1 − |a|²)`, which
//! equals `1 + |x|²|a|² − 2⟨x,a⟩` but keeps full relative accuracy when both
//! points approach the same boundary point.

use serde::Serialize;

use crate::{Error, Result};

/// Points within this distance of the unit sphere are treated as boundary points.
pub const BOUNDARY_TOL: f64 = 1e-14;

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    dot(x, x)
}

pub(crate) fn dist_sq(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// A point of the open unit ball with its norm cached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallPoint {
    coords: Vec<f64>,
    norm: f64,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("invalid ball point {coords:?}")));
        }
        let norm = norm_sq(&coords).sqrt();
        if norm >= 1.0 {
            return Err(Error::Domain(format!("|x| = {norm} is not inside the unit ball")));
        }
        Ok(BallPoint { coords, norm })
    }

    pub fn origin(n: usize) -> Self {
        BallPoint { coords: vec![0.0; n], norm: 0.0 }
    }

    /// `r·e_k` (k is zero-based).
    pub fn on_axis(n: usize, k: usize, r: f64) -> Result<Self> {
        let mut coords = vec![0.0; n];
        coords[k] = r;
        BallPoint::new(coords)
    }

    /// `r·ζ` for a sphere point ζ.
    pub fn scaled(zeta: &SpherePoint, r: f64) -> Result<Self> {
        BallPoint::new(zeta.coords().iter().map(|c| r * c).collect())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.coords)
    }

    /// `1 − |x|²`.
    pub fn one_minus_norm_sq(&self) -> f64 {
        (1.0 - self.norm) * (1.0 + self.norm)
    }
}

/// A point of the unit sphere 𝕊ⁿ⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Accepts coordinates whose norm is within [`BOUNDARY_TOL`] of 1.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = norm_sq(&coords).sqrt();
        if coords.is_empty() || !norm.is_finite() || (norm - 1.0).abs() > BOUNDARY_TOL {
            return Err(Error::Domain(format!("|ζ| = {norm} is not on the unit sphere")));
        }
        Ok(SpherePoint { coords })
    }

    /// The direction of a nonzero vector.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        let norm = norm_sq(v).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain(format!("cannot normalize {v:?}")));
        }
        Ok(SpherePoint { coords: v.iter().map(|c| c / norm).collect() })
    }

    /// The unit vector `e_k` (k is zero-based).
    pub fn axis(n: usize, k: usize) -> Self {
        let mut coords = vec![0.0; n];
        coords[k] = 1.0;
        SpherePoint { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `[x,a]`, symmetric in its arguments; both points in the closed ball.
pub fn bracket(x: &[f64], a: &[f64]) -> f64 {
    bracket_sq(x, a).sqrt()
}

/// `[x,a]²`.
pub fn bracket_sq(x: &[f64], a: &[f64]) -> f64 {
    let cx = 1.0 - norm_sq(x);
    let ca = 1.0 - norm_sq(a);
    dist_sq(x, a) + cx * ca
}

/// `φ_a(x)`.
pub fn moebius_map(a: &BallPoint, x: &[f64]) -> Vec<f64> {
    Moebius::new(a).apply(x)
}

/// `|φ'_x(y)| = (1 − |x|²)/[x,y]²`.
pub fn conformal_factor(x: &BallPoint, y: &[f64]) -> f64 {
    x.one_minus_norm_sq() / bracket_sq(x.coords(), y)
}

/// `1 − |φ_x(y)|² = (1 − |x|²)(1 − |y|²)/[x,y]²`, evaluated without cancellation.
pub fn image_complement(x: &BallPoint, y: &[f64]) -> f64 {
    x.one_minus_norm_sq() * (1.0 - norm_sq(y)) / bracket_sq(x.coords(), y)
}

/// The involution φ_a with `1 − |a|²` precomputed, for repeated application.
#[derive(Debug, Clone)]
pub struct Moebius {
    a: BallPoint,
    ca: f64,
}

impl Moebius {
    pub fn new(a: &BallPoint) -> Self {
        Moebius { a: a.clone(), ca: a.one_minus_norm_sq() }
    }

    pub fn center(&self) -> &BallPoint {
        &self.a
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let a = self.a.coords();
        let d2 = dist_sq(x, a);
        let b2 = d2 + (1.0 - norm_sq(x)) * self.ca;
        x.iter()
            .zip(a)
            .map(|(xi, ai)| (d2 * ai - self.ca * (xi - ai)) / b2)
            .collect()
    }
}


/// Residuals of the identities satisfied by `φ_x` at `y`: the involution
/// `|φ_x(φ_x(y)) − y|`, the relative error of `1 − |φ_x(y)|²` against the
/// closed form, and the relative error of `[x, φ_x(y)] = (1 − |x|²)/[x,y]`.
pub fn identity_residuals(x: &BallPoint, y: &[f64]) -> [f64; 3] {
    let m = Moebius::new(x);
    let z = m.apply(y);
    let back = m.apply(&z);
    let involution = dist_sq(&back, y).sqrt();
    let closed = image_complement(x, y);
    let complement = ((1.0 - norm_sq(&z)) - closed).abs() / closed;
    let expected = x.one_minus_norm_sq() / bracket(x.coords(), y);
    let br = (bracket(x.coords(), &z) - expected).abs() / expected;
    [involution, complement, br]
}

/// `||φ_x(ζ)| − 1|` for a boundary point `ζ`.
pub fn boundary_residual(x: &BallPoint, zeta: &SpherePoint) -> f64 {
    (norm_sq(&moebius_map(x, zeta.coords())).sqrt() - 1.0).abs()
}
