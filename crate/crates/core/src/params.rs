use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::specfun::{gamma, HypParams};
use crate::{Error, Result};

/// Dimension `n ≥ 3` and weight `α > −1` shared by all kernel math.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    n: usize,
    alpha: f64,
}

impl Params {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("dimension n = {n} must be at least 3")));
        }
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(Error::InvalidParams(format!("weight alpha = {alpha} must satisfy alpha > -1")));
        }
        Ok(Params { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub(crate) fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Coefficient `(n − 2 − α)α` of the zeroth-order term of T_α.
    pub fn zeroth_order(&self) -> f64 {
        (self.nf() - 2.0 - self.alpha) * self.alpha
    }

    /// `(a, b, c) = (−α/2, (n−2−α)/2, n/2)`: the radial T_α-harmonic equation in `s = |x|²`.
    pub fn radial_hyp(&self) -> HypParams {
        let a = self.alpha;
        HypParams::new_unchecked(-a / 2.0, (self.nf() - 2.0 - a) / 2.0, self.nf() / 2.0)
    }

    /// `((α+n)/2, (α+2)/2, α+2)`: the parameters of the Green function's ₂F₁ factor.
    pub fn green_hyp(&self) -> HypParams {
        let a = self.alpha;
        HypParams::new_unchecked((a + self.nf()) / 2.0, (a + 2.0) / 2.0, a + 2.0)
    }

    /// `((α+n)/2, (α+2)/2, α+1)`: the ₂F₁ factor of the radial derivative R G_α.
    pub fn green_derivative_hyp(&self) -> HypParams {
        let a = self.alpha;
        HypParams::new_unchecked((a + self.nf()) / 2.0, (a + 2.0) / 2.0, a + 1.0)
    }

    /// Whether this is the hyperbolic weight `α = n − 2`.
    pub fn is_hyperbolic(&self) -> bool {
        (self.alpha - (self.nf() - 2.0)).abs() < 1e-14
    }
}

/// Surface area of the unit sphere 𝕊ⁿ⁻¹ ⊂ ℝⁿ, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / gamma(half).expect("n/2 is positive")
}

/// Volume of the unit ball in ℝⁿ.
pub fn ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(Params::new(2, 0.0).is_err());
        assert!(Params::new(3, -1.0).is_err());
        assert!(Params::new(3, f64::NAN).is_err());
        assert!(Params::new(3, -0.999).is_ok());
    }

    #[test]
    fn areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-13);
    }
}
