//! Closed-form kernels of `T_α` and the constants that normalize them.
//!
//! With `s = |x|²`, `A = (α+n)/2`, `B = (α+2)/2`:
//!
//! ```text
//! P_α(x,ζ) = ĉ_α (1 − s)^{1+α} / |x − ζ|^{n+α}
//! G_α(x)   = d_α (1 − s)^{α+1} F(A, B; α+2; 1 − s)
//! RG_α(x)  = −2 d_α (α+1) s (1 − s)^α F(A, B; α+1; 1 − s)
//! h_α(|x|) = G_α(x) (1 − s)^{−α−1} = d_α F(A, B; α+2; 1 − s)
//! k_α(|x|) = |x|^{n−2} F(A, B; α+2; 1 − s)
//! ```
//!
//! `ĉ_α = 1/F(−α/2, (n−2−α)/2; n/2; 1)` is the constant for which
//! `u(0) = ĉ_α ∫ u dσ` holds for the regular radial `T_α`-harmonic function;
//! `c_α = −2Γ(α+1)Γ(n/2)/(Γ(A)Γ(B))` and `d_α = 1/c_α` are the signed
//! constants as usually written. `c_α = −2/ĉ_α`, so the two conventions differ by
//! the factor −2 at every `(n, α)`.
//!
//! Green potentials are normalized by [`KernelConstants::green_scale`]
//! `= 1/((α+1)|𝕊ⁿ⁻¹|)` and the sign recorded in [`SignAudit`]:
//!
//! ```text
//! u(0) = ĉ_α ∫ u dσ + sign · green_scale · ∫ T_α u · h_α(|y|) dV(y)
//! ```

use serde::Serialize;

use crate::moebius::{bracket_sq, dist_sq, norm_sq, BallPoint};
use crate::params::sphere_area;
use crate::quadrature::gauss::integrate_adaptive;
use crate::specfun::{gamma, hyp2f1, hyp2f1_at_one, hyp2f1_complement, limit_ratio_at_one, HypParams};
use crate::{Error, Params, Result};

/// Absolute tolerance of the adaptive quadrature behind [`hyperbolic_g`].
pub const HYPERBOLIC_G_TOL: f64 = 1e-12;

/// Which sign the Green term carries, and how it was established.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignAudit {
    /// `+1` or `−1`.
    pub green_sign: f64,
    /// Whether `green_sign` was measured by the manufactured-solution audit.
    pub audited: bool,
    /// Raw value of the audit statistic (ideally ±1).
    pub audit_ratio: Option<f64>,
    /// `c_α / ĉ_α = −2/ĉ_α²`; −2 whenever `ĉ_α = 1` (α = 0 or α = n − 2).
    pub paper_to_calibrated_ratio: f64,
    /// `c_α · d_α`, always 1.
    pub paper_product: f64,
}

/// Normalization constants for one `(n, α)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelConstants {
    pub params: Params,
    pub c_alpha_paper: f64,
    pub d_alpha_paper: f64,
    pub c_alpha_calibrated: f64,
    pub green_scale: f64,
    pub sign_audit: SignAudit,
}

/// `c_α = −2Γ(α+1)Γ(n/2)/(Γ((α+n)/2)Γ((α+2)/2))`.
pub fn c_alpha_paper(p: &Params) -> Result<f64> {
    let (n, a) = (p.nf(), p.alpha());
    Ok(-2.0 * gamma(a + 1.0)? * gamma(n / 2.0)? / (gamma((a + n) / 2.0)? * gamma((a + 2.0) / 2.0)?))
}

/// `d_α = −½Γ((α+n)/2)Γ((α+2)/2)/(Γ(α+1)Γ(n/2))`.
pub fn d_alpha_paper(p: &Params) -> Result<f64> {
    let (n, a) = (p.nf(), p.alpha());
    Ok(-0.5 * gamma((a + n) / 2.0)? * gamma((a + 2.0) / 2.0)? / (gamma(a + 1.0)? * gamma(n / 2.0)?))
}

/// `ĉ_α = 1/F(−α/2, (n−2−α)/2; n/2; 1)`.
pub fn calibrate_c_alpha(p: &Params) -> Result<f64> {
    Ok(1.0 / hyp2f1_at_one(&p.radial_hyp())?)
}

/// All constants, with the Green sign not yet audited (`+1`).
pub fn constants(p: &Params) -> Result<KernelConstants> {
    let c_paper = c_alpha_paper(p)?;
    let d_paper = d_alpha_paper(p)?;
    let c_cal = calibrate_c_alpha(p)?;
    Ok(KernelConstants {
        params: *p,
        c_alpha_paper: c_paper,
        d_alpha_paper: d_paper,
        c_alpha_calibrated: c_cal,
        green_scale: 1.0 / ((p.alpha() + 1.0) * sphere_area(p.n())),
        sign_audit: SignAudit {
            green_sign: 1.0,
            audited: false,
            audit_ratio: None,
            paper_to_calibrated_ratio: c_paper / c_cal,
            paper_product: c_paper * d_paper,
        },
    })
}

impl KernelConstants {
    pub fn new(p: &Params) -> Result<Self> {
        constants(p)
    }

    /// Record the outcome of a sign audit.
    pub fn with_audit(mut self, ratio: f64) -> Self {
        self.sign_audit.green_sign = if ratio >= 0.0 { 1.0 } else { -1.0 };
        self.sign_audit.audited = true;
        self.sign_audit.audit_ratio = Some(ratio);
        self
    }

    /// `sign · green_scale`, the factor in front of every Green potential.
    pub fn green_factor(&self) -> f64 {
        self.sign_audit.green_sign * self.green_scale
    }
}

/// `(1 − |x|²)^{1+α} / |x − ζ|^{n+α}`.
pub fn poisson_kernel_unnormalized(p: &Params, x: &[f64], zeta: &[f64]) -> f64 {
    let w = 1.0 - norm_sq(x);
    w.powf(1.0 + p.alpha()) * dist_sq(x, zeta).powf(-(p.nf() + p.alpha()) / 2.0)
}

/// `P_α(x, ζ)` with the calibrated constant.
pub fn poisson_kernel(k: &KernelConstants, x: &[f64], zeta: &[f64]) -> f64 {
    k.c_alpha_calibrated * poisson_kernel_unnormalized(&k.params, x, zeta)
}

fn check_interior(x: &[f64]) -> Result<f64> {
    let s = norm_sq(x);
    if !(s < 1.0) {
        return Err(Error::Domain(format!("|x|² = {s} is not inside the unit ball")));
    }
    if s == 0.0 {
        return Err(Error::Singular("Green function evaluated at its pole".into()));
    }
    Ok(s)
}

/// `G_α` at `|x|² = s` with `1 − s = w` supplied separately.
fn green_sw(k: &KernelConstants, s: f64, w: f64) -> Result<f64> {
    let a = k.params.alpha();
    Ok(k.d_alpha_paper * w.powf(a + 1.0) * hyp2f1_complement(&k.params.green_hyp(), s)?)
}

/// `G_α(x)`, `0 < |x| < 1`.
pub fn green_radial(k: &KernelConstants, x: &[f64]) -> Result<f64> {
    let s = check_interior(x)?;
    green_sw(k, s, 1.0 - s)
}

/// `RG_α(x) = ⟨x, ∇G_α(x)⟩`, `0 < |x| < 1`.
pub fn green_radial_derivative(k: &KernelConstants, x: &[f64]) -> Result<f64> {
    let s = check_interior(x)?;
    let a = k.params.alpha();
    let w = 1.0 - s;
    Ok(-2.0 * k.d_alpha_paper * (a + 1.0) * s * w.powf(a) * hyp2f1_complement(&k.params.green_derivative_hyp(), s)?)
}

/// Radial profile `r ↦ G_α(r)`, `0 < r < 1`.
pub fn green_profile(k: &KernelConstants, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1)")));
    }
    green_sw(k, r * r, (1.0 - r) * (1.0 + r))
}

/// The `|x|^{2−n}` coefficient of `G_α` at the origin: `lim |x|^{n−2} G_α(x)`.
pub fn green_origin_coefficient(k: &KernelConstants) -> Result<f64> {
    Ok(k.d_alpha_paper * k_alpha_limit(&k.params)?)
}

/// `lim_{r→0} k_α(r) = Γ(α+2)Γ((n−2)/2)/(Γ((α+n)/2)Γ((α+2)/2))`.
pub fn k_alpha_limit(p: &Params) -> Result<f64> {
    limit_ratio_at_one(&p.green_hyp())
}

/// `lim_{r→0} |x|^{n−2} RG_α(x) = −2d_α(α+1)Γ(α+1)Γ(n/2)/(Γ((α+n)/2)Γ((α+2)/2))`.
pub fn green_derivative_origin_coefficient(k: &KernelConstants) -> Result<f64> {
    let a = k.params.alpha();
    Ok(-2.0 * k.d_alpha_paper * (a + 1.0) * limit_ratio_at_one(&k.params.green_derivative_hyp())?)
}

/// `h_α(r) = d_α F(A, B; α+2; 1 − r²)`, `0 < r < 1`.
pub fn h_alpha(k: &KernelConstants, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1)")));
    }
    Ok(k.d_alpha_paper * hyp2f1_complement(&k.params.green_hyp(), r * r)?)
}

/// `k_α(r) = r^{n−2} F(A, B; α+2; 1 − r²)`, extended continuously to `r = 0`.
pub fn k_alpha(p: &Params, r: f64) -> Result<f64> {
    if r == 0.0 {
        return k_alpha_limit(p);
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1)")));
    }
    Ok(r.powi(p.n() as i32 - 2) * hyp2f1_complement(&p.green_hyp(), r * r)?)
}

/// `(1 − s)^{α+1} F(A, B; α+2; 1 − s)`: the Green profile in `s = |x|²` without `d_α`.
pub fn green_profile_s(p: &Params, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("s = {s} outside (0, 1)")));
    }
    Ok((1.0 - s).powf(p.alpha() + 1.0) * hyp2f1_complement(&p.green_hyp(), s)?)
}

/// `s(1−s)g'' + (n/2 − (n/2 − α)s)g' + (n−2−α)α g/4` by five-point central differences
/// with `step`: the radial form of `T_α u = 0` for `u = g(|x|²)`, divided by 4.
pub fn radial_ode_residual<G>(p: &Params, g: G, s: f64, step: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let (gm2, gm1, g0, gp1, gp2) = (g(s - 2.0 * step)?, g(s - step)?, g(s)?, g(s + step)?, g(s + 2.0 * step)?);
    let d1 = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * step);
    let d2 = (-gm2 + 16.0 * gm1 - 30.0 * g0 + 16.0 * gp1 - gp2) / (12.0 * step * step);
    let h = p.nf() / 2.0;
    Ok(s * (1.0 - s) * d2 + (h - (h - p.alpha()) * s) * d1 + p.zeroth_order() / 4.0 * g0)
}

/// Two-point Green function `G_α(x,y) = [x,y]^{α+2−n} G_α(φ_x(y))`; symmetric in `x, y`.
pub fn green_two_point(k: &KernelConstants, x: &BallPoint, y: &BallPoint) -> Result<f64> {
    let (s, w, b2) = image_norms(x, y)?;
    let e = (k.params.alpha() + 2.0 - k.params.nf()) / 2.0;
    Ok(b2.powf(e) * green_sw(k, s, w)?)
}

/// `|φ'_x(y)|^{(n−2−α)/2} G_α(φ_x(y))`: the conformal-factor weighting, which equals
/// [`green_two_point`] times `(1 − |x|²)^{(n−2−α)/2}` and is not symmetric.
pub fn green_two_point_conformal(k: &KernelConstants, x: &BallPoint, y: &BallPoint) -> Result<f64> {
    let (s, w, b2) = image_norms(x, y)?;
    let e = (k.params.nf() - 2.0 - k.params.alpha()) / 2.0;
    let factor = x.one_minus_norm_sq() / b2;
    Ok(factor.powf(e) * green_sw(k, s, w)?)
}

/// `(|φ_x(y)|², 1 − |φ_x(y)|², [x,y]²)` without cancellation.
fn image_norms(x: &BallPoint, y: &BallPoint) -> Result<(f64, f64, f64)> {
    let b2 = bracket_sq(x.coords(), y.coords());
    let d2 = dist_sq(x.coords(), y.coords());
    if d2 == 0.0 {
        return Err(Error::Singular("two-point Green function at x = y".into()));
    }
    Ok((d2 / b2, x.one_minus_norm_sq() * y.one_minus_norm_sq() / b2, b2))
}

/// Regular radial `T_α`-harmonic function `F(−α/2, (n−2−α)/2; n/2; r²)`, `0 ≤ r ≤ 1`.
pub fn radial_solution(p: &Params, r: f64) -> Result<f64> {
    solution_profile(&p.radial_hyp(), r)
}

/// Radial factor `F(−α/2, k + (n−2−α)/2; k + n/2; r²)` of the `T_α`-harmonic
/// functions `f(r) Y_k(x/|x|) r^k` built on a degree-`k` spherical harmonic.
pub fn harmonic_profile(p: &Params, degree: usize, r: f64) -> Result<f64> {
    let h = p.radial_hyp();
    let k = degree as f64;
    solution_profile(&HypParams::new(h.a, h.b + k, h.c + k)?, r)
}

fn solution_profile(h: &HypParams, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    if r == 1.0 {
        hyp2f1_at_one(h)
    } else {
        hyp2f1(h, r * r)
    }
}

/// `g(r, t) = ∫_r^t (1 − τ²)^{n−2} τ^{1−n} dτ` by adaptive Gauss–Kronrod quadrature.
pub fn hyperbolic_g(n: usize, r: f64, t: f64) -> Result<f64> {
    if !(0.0 <= r && r <= t && t <= 1.0) {
        return Err(Error::Domain(format!("hyperbolic g needs 0 <= r <= t <= 1, got ({r}, {t})")));
    }
    if r == t {
        return Ok(0.0);
    }
    if r == 0.0 {
        return Err(Error::Singular("hyperbolic g(0, t) diverges for n >= 3".into()));
    }
    let e = n as i32;
    integrate_adaptive(|tau| ((1.0 - tau) * (1.0 + tau)).powi(e - 2) * tau.powi(1 - e), r, t, HYPERBOLIC_G_TOL)
}

/// Hyperbolic Green function `G_h(x,y) = g(|x − y|/[x,y], 1)`.
pub fn hyperbolic_green(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    let (s, _, _) = image_norms(x, y)?;
    hyperbolic_g(x.dim(), s.sqrt(), 1.0)
}

/// Poisson–Szegő kernel `P_h(x,ζ) = ((1 − |x|²)/|x − ζ|²)^{n−1}`.
pub fn poisson_szego(x: &[f64], zeta: &[f64]) -> f64 {
    let w = 1.0 - norm_sq(x);
    (w / dist_sq(x, zeta)).powi(x.len() as i32 - 1)
}
