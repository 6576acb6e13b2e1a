//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real parameters and
//! real `z ∈ (−1, 1)`.
//!
//! Evaluation strategy:
//!
//! * `z < −1/2`: Pfaff transformation `F(a,b;c;z) = (1−z)^{−a} F(a, c−b; c; z/(z−1))`,
//!   which lands in `(1/3, 1/2)`;
//! * `|z| ≤ 1/2`: the defining series;
//! * `z > 1/2`, `c − a − b` away from an integer: the `z → 1 − z` connection formula;
//! * `z > 1/2`, `c − a − b` within [`NEAR_INTEGER`] of an integer: analytic
//!   continuation of the hypergeometric ODE from `z = 1/2` by Taylor
//!   re-expansion, in steps that halve the distance to the singular point 1.
//!
//! The distance `1 − z` is carried explicitly through every branch
//! ([`hyp2f1_complement`]) so that kernels evaluated at `1 − |x|²` for small
//! `|x|` keep full relative accuracy in `|x|²`.

use serde::{Deserialize, Serialize};

use super::gamma::{gamma, rgamma};
use crate::{Error, Result};

/// Term budget for every series.
pub const MAX_TERMS: usize = 10_000;
/// Declared relative accuracy.
pub const ACCURACY: f64 = 1e-10;
/// Finite-difference step used by [`ode_residual`] by default.
pub const ODE_FD_STEP: f64 = 1e-5;
/// Distance of `c − a − b` to the nearest integer below which the connection
/// formula is replaced by ODE continuation.
pub const NEAR_INTEGER: f64 = 1e-2;

const SERIES_EPS: f64 = 0.5 * f64::EPSILON;
const TAYLOR_MAX_TERMS: usize = 2_000;

/// Parameters `(a, b, c)` of ₂F₁, `c ∉ {0, −1, −2, …}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

impl HypParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Domain(format!("non-finite parameters ({a}, {b}, {c})")));
        }
        if is_nonpositive_integer(c) {
            return Err(Error::Domain(format!("c = {c} is a non-positive integer")));
        }
        Ok(HypParams { a, b, c })
    }

    pub(crate) fn new_unchecked(a: f64, b: f64, c: f64) -> Self {
        HypParams { a, b, c }
    }

    /// `c − a − b`, which governs the behaviour at `z = 1`.
    pub fn excess(&self) -> f64 {
        self.c - self.a - self.b
    }

    fn validate(&self) -> Result<()> {
        HypParams::new(self.a, self.b, self.c).map(|_| ())
    }

    fn terminates(&self) -> bool {
        is_nonpositive_integer(self.a) || is_nonpositive_integer(self.b)
    }
}

/// ₂F₁(a, b; c; z) for `z ∈ (−1, 1)`.
pub fn hyp2f1(p: &HypParams, z: f64) -> Result<f64> {
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::Domain(format!("hyp2f1 requires z in (-1, 1), got {z}")));
    }
    eval(p, z, 1.0 - z)
}

/// ₂F₁(a, b; c; 1 − w) for `w ∈ (0, 2)`, with `w` supplied exactly.
pub fn hyp2f1_complement(p: &HypParams, w: f64) -> Result<f64> {
    if !(w > 0.0 && w < 2.0) {
        return Err(Error::Domain(format!("hyp2f1 requires 1 - z in (0, 2), got {w}")));
    }
    eval(p, 1.0 - w, w)
}

/// d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z).
pub fn hyp2f1_derivative(p: &HypParams, z: f64) -> Result<f64> {
    if p.a == 0.0 || p.b == 0.0 {
        return Ok(0.0);
    }
    let shifted = HypParams::new(p.a + 1.0, p.b + 1.0, p.c + 1.0)?;
    Ok(p.a * p.b / p.c * hyp2f1(&shifted, z)?)
}

fn eval(p: &HypParams, z: f64, w: f64) -> Result<f64> {
    p.validate()?;
    let HypParams { a, b, c } = *p;
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < -0.5 {
        // z/(z-1) = -z/w
        return Ok(w.powf(-a) * series(a, c - b, c, -z / w)?);
    }
    if z <= 0.5 || p.terminates() {
        return series(a, b, c, z);
    }
    let m = p.excess();
    if (m - m.round()).abs() < NEAR_INTEGER {
        continuation(p, w)
    } else {
        connection(p, w)
    }
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= SERIES_EPS * sum.abs() {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    if term.abs() <= ACCURACY * sum.abs() {
        Ok(sum)
    } else {
        Err(Error::NonConvergence { terms: MAX_TERMS, tolerance: ACCURACY })
    }
}

/// Connection formula about `z = 1`; `w = 1 − z ∈ (0, 1/2)` and `c − a − b ∉ ℤ`.
fn connection(p: &HypParams, w: f64) -> Result<f64> {
    let HypParams { a, b, c } = *p;
    let m = p.excess();
    let gc = gamma(c)?;
    let first = {
        let r = rgamma(c - a) * rgamma(c - b);
        if r == 0.0 {
            0.0
        } else {
            gc * gamma(m)? * r * series(a, b, 1.0 - m, w)?
        }
    };
    let second = {
        let r = rgamma(a) * rgamma(b);
        if r == 0.0 {
            0.0
        } else {
            gc * gamma(-m)? * r * w.powf(m) * series(c - a, c - b, 1.0 + m, w)?
        }
    };
    Ok(first + second)
}

/// Continuation of the solution `F` of the hypergeometric ODE from `z = 1/2`
/// to `z = 1 − w` by repeated Taylor re-expansion.
fn continuation(p: &HypParams, w: f64) -> Result<f64> {
    let HypParams { a, b, c } = *p;
    let mut f = series(a, b, c, 0.5)?;
    let mut df = if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b / c * series(a + 1.0, b + 1.0, c + 1.0, 0.5)?
    };
    // u is the distance of the current expansion point to z = 1
    let mut u = 0.5_f64;
    let mut steps = 0;
    while u > w {
        let h = (u - w).min(0.5 * u);
        let (nf, ndf) = taylor_step(p, u, f, df, h)?;
        f = nf;
        df = ndf;
        u -= h;
        steps += 1;
        if steps > 2_000 {
            return Err(Error::NonConvergence { terms: steps, tolerance: ACCURACY });
        }
    }
    Ok(f)
}

/// Advance `(w, w')` of the hypergeometric ODE from `z = 1 − u` to `z = 1 − u + h`.
fn taylor_step(p: &HypParams, u: f64, f: f64, df: f64, h: f64) -> Result<(f64, f64)> {
    let HypParams { a, b, c } = *p;
    let x = 1.0 - u;
    // z(1-z) = p0 + p1 t - t²,  c - (a+b+1)z = q0 + q1 t
    let p0 = x * u;
    let p1 = 2.0 * u - 1.0;
    let q0 = c - (a + b + 1.0) * x;
    let q1 = -(a + b + 1.0);
    let r = -a * b;

    // scaled coefficients e_k = c_k h^k
    let mut e_prev = f;
    let mut e_cur = df * h;
    let mut val = e_prev + e_cur;
    let mut der = e_cur;
    let mut small = 0;
    for k in 0..TAYLOR_MAX_TERMS {
        let kf = k as f64;
        let e_next = -((p1 * kf + q0) * (kf + 1.0) * e_cur * h
            + (-kf * (kf - 1.0) + q1 * kf + r) * e_prev * h * h)
            / (p0 * (kf + 1.0) * (kf + 2.0));
        val += e_next;
        der += (kf + 2.0) * e_next;
        let scale = val.abs().max(der.abs());
        if e_next.abs() * (kf + 2.0) <= SERIES_EPS * scale || scale == 0.0 {
            small += 1;
            if small == 2 {
                return Ok((val, der / h));
            }
        } else {
            small = 0;
        }
        e_prev = e_cur;
        e_cur = e_next;
    }
    Err(Error::NonConvergence { terms: TAYLOR_MAX_TERMS, tolerance: ACCURACY })
}

/// Gauss summation `F(a,b;c;1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b))`, valid for `c − a − b > 0`
/// or when the series terminates.
pub fn hyp2f1_at_one(p: &HypParams) -> Result<f64> {
    p.validate()?;
    if p.terminates() {
        return series(p.a, p.b, p.c, 1.0);
    }
    let m = p.excess();
    if m <= 0.0 {
        return Err(Error::Domain(format!("F(a,b;c;1) requires c - a - b > 0, got {m}")));
    }
    Ok(gamma(p.c)? * gamma(m)? * rgamma(p.c - p.a) * rgamma(p.c - p.b))
}

/// `lim_{z→1⁻} F(a,b;c;z)/(1−z)^{c−a−b} = Γ(c)Γ(a+b−c)/(Γ(a)Γ(b))`, valid for `c − a − b < 0`.
pub fn limit_ratio_at_one(p: &HypParams) -> Result<f64> {
    p.validate()?;
    let m = p.excess();
    if m >= 0.0 {
        return Err(Error::Domain(format!("the limit ratio requires c - a - b < 0, got {m}")));
    }
    Ok(gamma(p.c)? * gamma(-m)? * rgamma(p.a) * rgamma(p.b))
}

/// The pair of solutions about `z = 1`:
///
/// ```text
/// X₁(z) = F(a, b; 1+a+b−c; 1−z)
/// X₂(z) = (1−z)^{c−a−b} F(c−a, c−b; 1+c−a−b; 1−z)
/// ```
///
/// For `c = a + b` both coincide. A nonzero integer `c − a − b` makes one of
/// the two lower parameters a non-positive integer and is rejected; the
/// logarithmic second solution is not computed.
pub fn solutions_at_one(p: &HypParams, z: f64) -> Result<(f64, f64)> {
    p.validate()?;
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!("solutions about 1 require z in (0, 1), got {z}")));
    }
    let m = p.excess();
    if is_nonpositive_integer(1.0 - m) || is_nonpositive_integer(1.0 + m) {
        return Err(Error::Degenerate(format!(
            "c - a - b = {m} is a nonzero integer; the second solution about z = 1 is logarithmic"
        )));
    }
    let w = 1.0 - z;
    let x1 = hyp2f1_complement(&HypParams::new(p.a, p.b, 1.0 - m)?, z)?;
    let x2 = w.powf(m) * hyp2f1_complement(&HypParams::new(p.c - p.a, p.c - p.b, 1.0 + m)?, z)?;
    Ok((x1, x2))
}

/// `H_abc w = z(1−z)w'' + [c − (a+b+1)z]w' − ab·w` from supplied derivatives.
pub fn ode_operator(p: &HypParams, z: f64, w: f64, dw: f64, d2w: f64) -> f64 {
    z * (1.0 - z) * d2w + (p.c - (p.a + p.b + 1.0) * z) * dw - p.a * p.b * w
}

/// `H_abc w` at `z ∈ (0, 1)` with derivatives of `w` from central differences of width `step`.
pub fn ode_residual<W>(p: &HypParams, w: W, z: f64, step: f64) -> Result<f64>
where
    W: Fn(f64) -> Result<f64>,
{
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!("ode residual requires z in (0, 1), got {z}")));
    }
    let f0 = w(z)?;
    let fp = w(z + step)?;
    let fm = w(z - step)?;
    let d1 = (fp - fm) / (2.0 * step);
    let d2 = (fp - 2.0 * f0 + fm) / (step * step);
    Ok(ode_operator(p, z, f0, d1, d2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hp(a: f64, b: f64, c: f64) -> HypParams {
        HypParams::new(a, b, c).unwrap()
    }

    #[test]
    fn value_at_zero_is_one() {
        assert_eq!(hyp2f1(&hp(2.3, -1.7, 0.4), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn log_closed_form() {
        // F(1,1;2;z) = -ln(1-z)/z
        for z in [-0.9f64, -0.6, -0.2, 0.3, 0.5, 0.7, 0.95, 0.999_999] {
            let expected = -(1.0 - z).ln() / z;
            let got = hyp2f1(&hp(1.0, 1.0, 2.0), z).unwrap();
            assert!(((got - expected) / expected).abs() < 1e-13, "z = {z}: {got} vs {expected}");
        }
        let got = hyp2f1(&hp(1.0, 1.0, 2.0), 0.5).unwrap();
        assert!((got - 1.386_294_361_119_890_6).abs() < 1e-14);
    }

    #[test]
    fn integer_excess_pole_closed_form() {
        // F(1,1;1;z) = F(2,1;2;z) = 1/(1-z): c - a - b = -1
        for w in [0.4, 1e-3, 1e-6, 1e-9] {
            for p in [hp(1.0, 1.0, 1.0), hp(2.0, 1.0, 2.0)] {
                let got = hyp2f1_complement(&p, w).unwrap();
                assert!((got * w - 1.0).abs() < 1e-12, "w = {w}: {got}");
            }
        }
    }

    #[test]
    fn a_zero_truncates() {
        let p = crate::Params::new(3, 0.0).unwrap().radial_hyp();
        assert_eq!(hyp2f1(&p, 0.25).unwrap(), 1.0);
        assert_eq!(hyp2f1(&p, 0.9).unwrap(), 1.0);
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(matches!(hyp2f1(&hp(1.0, 1.0, 2.0), 1.0), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(&hp(1.0, 1.0, 2.0), -1.0), Err(Error::Domain(_))));
        assert!(HypParams::new(1.0, 1.0, -2.0).is_err());
    }

    #[test]
    fn gauss_summation() {
        let v = hyp2f1_at_one(&hp(0.5, 0.5, 2.0)).unwrap();
        assert!((v - 4.0 / PI).abs() < 1e-14);
        assert_eq!(hyp2f1_at_one(&hp(0.0, 3.3, 1.7)).unwrap(), 1.0);
        assert!(matches!(hyp2f1_at_one(&hp(1.0, 1.0, 2.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn limit_ratio_values() {
        // n = 4, alpha = 0 -> 1;  n = 3, alpha = 1 -> 4
        assert!((limit_ratio_at_one(&hp(2.0, 1.0, 2.0)).unwrap() - 1.0).abs() < 1e-14);
        assert!((limit_ratio_at_one(&hp(2.0, 1.5, 3.0)).unwrap() - 4.0).abs() < 1e-13);
        assert!(matches!(limit_ratio_at_one(&hp(0.25, 0.25, 1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn solutions_coincide_when_excess_vanishes() {
        let p = hp(0.3, 0.7, 1.0);
        let (x1, x2) = solutions_at_one(&p, 0.4).unwrap();
        let direct = hyp2f1(&hp(0.3, 0.7, 1.0), 0.6).unwrap();
        assert_eq!(x1, x2);
        assert!((x1 - direct).abs() < 1e-14);
    }

    #[test]
    fn solutions_reject_integer_excess() {
        assert!(matches!(solutions_at_one(&hp(0.5, 0.5, 2.0), 0.5), Err(Error::Degenerate(_))));
        assert!(matches!(solutions_at_one(&hp(1.5, 0.5, 1.0), 0.5), Err(Error::Degenerate(_))));
    }

    #[test]
    fn second_solution_vanishes_at_one() {
        let p = hp(-0.5, 0.5, 1.5);
        let (_, x2) = solutions_at_one(&p, 1.0 - 1e-10).unwrap();
        assert!(x2.abs() < 1e-14);
    }

    #[test]
    fn ode_residual_of_constant() {
        let p = hp(0.0, 2.5, 1.5);
        assert_eq!(ode_residual(&p, |_| Ok(3.0), 0.4, ODE_FD_STEP).unwrap(), 0.0);
    }

    #[test]
    fn continuation_matches_connection_off_integer() {
        // just outside the near-integer band the two routes must agree
        let p = hp(0.7, 1.1, 1.8 + 1.1 * NEAR_INTEGER);
        for w in [0.3, 1e-2, 1e-5] {
            let a = connection(&p, w).unwrap();
            let b = continuation(&p, w).unwrap();
            assert!(((a - b) / a).abs() < 1e-12, "w = {w}: {a} vs {b}");
        }
    }
}
