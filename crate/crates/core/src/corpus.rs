//! Closed-form test fields with analytic gradients, Laplacians and `T_α` images.
//!
//! | Case | `u` | `T_α u` |
//! |------|-----|---------|
//! | `one` | `1` | `(n−2−α)α` |
//! | `one-minus-r2` | `1 − s` | `−2n(1−s) − 4αs + (n−2−α)α(1−s)` |
//! | `x1` | `x₁` | `α(n−α)x₁` |
//! | `x1sq-minus-x2sq` | `x₁² − x₂²` | `(4α + (n−2−α)α) u` |
//! | `one-minus-r2-squared` | `(1 − s)²` | `(1−s)(8s − 4n(1−s)) − 8αs(1−s) + (n−2−α)α(1−s)²` |
//! | `radial-harmonic` | `F(−α/2, (n−2−α)/2; n/2; s)` | `0` |
//! | `poisson-slice` | `P_α(·, ζ₀)` | `0` |
//! | `moebius-slice` | `[a,x]^{α+2−n} v(φ_a(x))`, `v = F(−α/2, (n−α)/2; (n+2)/2; s) x₁` | `0` |
//!
//! (`s = |x|²`.) The two slices are `T_α`-harmonic; the Möbius slice is smooth
//! up to the sphere, while the Poisson slice concentrates at `ζ₀`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kernels::{self, KernelConstants};
use crate::moebius::{bracket, dist_sq, dot, norm_sq, BallPoint, Moebius, SpherePoint};
use crate::operators::{ScalarField, ValueFn};
use crate::specfun::{hyp2f1, hyp2f1_at_one};
use crate::{Error, Params, Result};

/// Identifier of a corpus field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    One,
    OneMinusR2,
    X1,
    X1sqMinusX2sq,
    OneMinusR2Squared,
    RadialHarmonic,
    PoissonSlice,
    MoebiusSlice,
}

impl Case {
    pub const ALL: [Case; 8] = [
        Case::One,
        Case::OneMinusR2,
        Case::X1,
        Case::X1sqMinusX2sq,
        Case::OneMinusR2Squared,
        Case::RadialHarmonic,
        Case::PoissonSlice,
        Case::MoebiusSlice,
    ];

    /// Cases that extend continuously to the closed ball (usable as Dirichlet data).
    pub const MANUFACTURED: [Case; 5] =
        [Case::OneMinusR2, Case::X1, Case::X1sqMinusX2sq, Case::OneMinusR2Squared, Case::MoebiusSlice];

    pub fn id(&self) -> &'static str {
        match self {
            Case::One => "one",
            Case::OneMinusR2 => "one-minus-r2",
            Case::X1 => "x1",
            Case::X1sqMinusX2sq => "x1sq-minus-x2sq",
            Case::OneMinusR2Squared => "one-minus-r2-squared",
            Case::RadialHarmonic => "radial-harmonic",
            Case::PoissonSlice => "poisson-slice",
            Case::MoebiusSlice => "moebius-slice",
        }
    }

    /// Whether `T_α u ≡ 0`.
    pub fn is_harmonic(&self) -> bool {
        matches!(self, Case::RadialHarmonic | Case::PoissonSlice | Case::MoebiusSlice)
    }

    pub fn build(&self, p: &Params) -> Result<Manufactured> {
        match self {
            Case::One => Ok(constant_one(p)),
            Case::OneMinusR2 => Ok(one_minus_r2(p)),
            Case::X1 => Ok(coordinate_x1(p)),
            Case::X1sqMinusX2sq => Ok(x1sq_minus_x2sq(p)),
            Case::OneMinusR2Squared => Ok(one_minus_r2_squared(p)),
            Case::RadialHarmonic => radial_harmonic(p),
            Case::PoissonSlice => poisson_slice(p, &default_pole(p.n())),
            Case::MoebiusSlice => moebius_slice(p, &default_slice_center(p.n())?),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .iter()
            .find(|c| c.id() == s)
            .copied()
            .ok_or_else(|| Error::InvalidParams(format!("unknown corpus case '{s}'")))
    }
}

/// A corpus field together with its exact `T_α` image.
#[derive(Clone)]
pub struct Manufactured {
    /// `None` for fields built outside the fixed corpus.
    pub case: Option<Case>,
    pub field: ScalarField,
    t_alpha: ValueFn,
    /// Whether `field` extends continuously to the sphere.
    pub boundary_continuous: bool,
}

impl fmt::Debug for Manufactured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Manufactured").field("case", &self.case).field("field", &self.field).finish()
    }
}

impl Manufactured {
    fn new<T>(case: Case, field: ScalarField, t_alpha: T) -> Self
    where
        T: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Manufactured { case: Some(case), field, t_alpha: Arc::new(t_alpha), boundary_continuous: true }
    }

    /// A field outside the corpus with a caller-supplied exact `T_α` image.
    pub fn custom<T>(field: ScalarField, t_alpha: T, boundary_continuous: bool) -> Self
    where
        T: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Manufactured { case: None, field, t_alpha: Arc::new(t_alpha), boundary_continuous }
    }

    pub fn name(&self) -> &str {
        self.field.name()
    }

    /// Exact `T_α u(x)`.
    pub fn t_alpha(&self, x: &[f64]) -> f64 {
        (self.t_alpha)(x)
    }

    /// The exact `T_α u` as a shareable closure.
    pub fn t_alpha_fn(&self) -> ValueFn {
        self.t_alpha.clone()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.field.value(x)
    }
}

/// `ζ₀ = (1, 1, 0, …)/√2`, off every coordinate axis used by the corpus.
pub fn default_pole(n: usize) -> SpherePoint {
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    v[1] = 1.0;
    SpherePoint::normalize(&v).expect("nonzero")
}

/// Center `a = ½(1, 2, 2, 0, …)/3` of the default Möbius slice.
pub fn default_slice_center(n: usize) -> Result<BallPoint> {
    let mut v = vec![0.0; n];
    v[0] = 1.0 / 6.0;
    v[1] = 2.0 / 6.0;
    v[2] = 2.0 / 6.0;
    BallPoint::new(v)
}

fn constant_one(p: &Params) -> Manufactured {
    let c0 = p.zeroth_order();
    let field = ScalarField::new("one", |_: &[f64]| 1.0)
        .with_gradient(|x: &[f64]| vec![0.0; x.len()])
        .with_laplacian(|_: &[f64]| 0.0);
    Manufactured::new(Case::One, field, move |_| c0)
}

fn one_minus_r2(p: &Params) -> Manufactured {
    let (n, a, c0) = (p.nf(), p.alpha(), p.zeroth_order());
    let field = ScalarField::new("one-minus-r2", |x: &[f64]| 1.0 - norm_sq(x))
        .with_gradient(|x: &[f64]| x.iter().map(|c| -2.0 * c).collect())
        .with_laplacian(move |_: &[f64]| -2.0 * n);
    Manufactured::new(Case::OneMinusR2, field, move |x| {
        let s = norm_sq(x);
        -2.0 * n * (1.0 - s) - 4.0 * a * s + c0 * (1.0 - s)
    })
}

fn coordinate_x1(p: &Params) -> Manufactured {
    let (n, a) = (p.nf(), p.alpha());
    let field = ScalarField::new("x1", |x: &[f64]| x[0])
        .with_gradient(|x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[0] = 1.0;
            g
        })
        .with_laplacian(|_: &[f64]| 0.0);
    Manufactured::new(Case::X1, field, move |x| a * (n - a) * x[0])
}

fn x1sq_minus_x2sq(p: &Params) -> Manufactured {
    let k = 4.0 * p.alpha() + p.zeroth_order();
    let field = ScalarField::new("x1sq-minus-x2sq", |x: &[f64]| x[0] * x[0] - x[1] * x[1])
        .with_gradient(|x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[0] = 2.0 * x[0];
            g[1] = -2.0 * x[1];
            g
        })
        .with_laplacian(|_: &[f64]| 0.0);
    Manufactured::new(Case::X1sqMinusX2sq, field, move |x| k * (x[0] * x[0] - x[1] * x[1]))
}

fn one_minus_r2_squared(p: &Params) -> Manufactured {
    let (n, a, c0) = (p.nf(), p.alpha(), p.zeroth_order());
    let field = ScalarField::new("one-minus-r2-squared", |x: &[f64]| (1.0 - norm_sq(x)).powi(2))
        .with_gradient(|x: &[f64]| {
            let w = 1.0 - norm_sq(x);
            x.iter().map(|c| -4.0 * w * c).collect()
        })
        .with_laplacian(move |x: &[f64]| {
            let s = norm_sq(x);
            8.0 * s - 4.0 * n * (1.0 - s)
        });
    Manufactured::new(Case::OneMinusR2Squared, field, move |x| {
        let s = norm_sq(x);
        let w = 1.0 - s;
        w * (8.0 * s - 4.0 * n * w) - 8.0 * a * s * w + c0 * w * w
    })
}

/// `F(a,b;c;s)` for `s ∈ [0, 1]` including the endpoint.
fn profile_value(h: &crate::specfun::HypParams, s: f64) -> f64 {
    let r = if s >= 1.0 { hyp2f1_at_one(h) } else { hyp2f1(h, s) };
    r.unwrap_or(f64::NAN)
}

fn radial_harmonic(p: &Params) -> Result<Manufactured> {
    let h = p.radial_hyp();
    let dh = crate::specfun::HypParams::new(h.a + 1.0, h.b + 1.0, h.c + 1.0)?;
    let d2h = crate::specfun::HypParams::new(h.a + 2.0, h.b + 2.0, h.c + 2.0)?;
    let k1 = h.a * h.b / h.c;
    let k2 = k1 * (h.a + 1.0) * (h.b + 1.0) / (h.c + 1.0);
    let n = p.nf();
    // u = f(s): ∇u = 2f'(s)x, Δu = 2n f'(s) + 4s f''(s)
    let field = ScalarField::new("radial-harmonic", move |x: &[f64]| profile_value(&h, norm_sq(x)))
        .with_gradient(move |x: &[f64]| {
            let d = k1 * profile_value(&dh, norm_sq(x));
            x.iter().map(|c| 2.0 * d * c).collect()
        })
        .with_laplacian(move |x: &[f64]| {
            let s = norm_sq(x);
            2.0 * n * k1 * profile_value(&dh, s) + 4.0 * s * k2 * profile_value(&d2h, s)
        });
    Ok(Manufactured::new(Case::RadialHarmonic, field, |_| 0.0))
}

/// `P_α(·, ζ₀)` with analytic gradient and Laplacian.
pub fn poisson_slice(p: &Params, pole: &SpherePoint) -> Result<Manufactured> {
    let k = kernels::constants(p)?;
    let (n, a) = (p.nf(), p.alpha());
    let c = k.c_alpha_calibrated;
    let z = pole.coords().to_vec();
    let (zv, zg, zl) = (z.clone(), z.clone(), z);
    let e = 1.0 + a;
    let m = n + a;
    let field = ScalarField::new("poisson-slice", move |x: &[f64]| {
        let w = 1.0 - norm_sq(x);
        c * w.powf(e) * dist_sq(x, &zv).powf(-m / 2.0)
    })
    .with_gradient(move |x: &[f64]| {
        let w = 1.0 - norm_sq(x);
        let rho2 = dist_sq(x, &zg);
        let bv = rho2.powf(-m / 2.0);
        x.iter()
            .zip(&zg)
            .map(|(xi, zi)| c * (-2.0 * e * xi * w.powf(e - 1.0) * bv - m * w.powf(e) * bv / rho2 * (xi - zi)))
            .collect()
    })
    .with_laplacian(move |x: &[f64]| {
        // Δ(AB) = BΔA + AΔB + 2∇A·∇B with A = (1−s)^e, B = ρ^{−m}
        let s = norm_sq(x);
        let w = 1.0 - s;
        let rho2 = dist_sq(x, &zl);
        let bv = rho2.powf(-m / 2.0);
        let av = w.powf(e);
        let lap_a = -2.0 * e * n * w.powf(e - 1.0) + 4.0 * e * (e - 1.0) * s * w.powf(e - 2.0);
        let lap_b = m * (m + 2.0 - n) * bv / rho2;
        let x_dot_d = s - dot(x, &zl);
        let cross = 2.0 * e * m * w.powf(e - 1.0) * bv / rho2 * x_dot_d;
        c * (bv * lap_a + av * lap_b + 2.0 * cross)
    });
    Ok(Manufactured { boundary_continuous: false, ..Manufactured::new(Case::PoissonSlice, field, |_| 0.0) })
}

/// `x ↦ [a,x]^{α+2−n} v(φ_a(x))` with `v` the degree-one `T_α`-harmonic function
/// `F(−α/2, (n−α)/2; (n+2)/2; |x|²) x₁`; `T_α`-harmonic and smooth on the closed ball.
pub fn moebius_slice(p: &Params, center: &BallPoint) -> Result<Manufactured> {
    let h = p.radial_hyp();
    let h1 = crate::specfun::HypParams::new(h.a, h.b + 1.0, h.c + 1.0)?;
    let e = p.alpha() + 2.0 - p.nf();
    let m = Moebius::new(center);
    let a = center.coords().to_vec();
    let field = ScalarField::new("moebius-slice", move |x: &[f64]| {
        let y = m.apply(x);
        bracket(&a, x).powf(e) * profile_value(&h1, norm_sq(&y).min(1.0)) * y[0]
    });
    Ok(Manufactured::new(Case::MoebiusSlice, field, |_| 0.0))
}

/// Value at the origin of the default Möbius slice, `v(a)` in closed form.
pub fn moebius_slice_center_value(p: &Params, center: &BallPoint) -> Result<f64> {
    let h = p.radial_hyp();
    let h1 = crate::specfun::HypParams::new(h.a, h.b + 1.0, h.c + 1.0)?;
    Ok(hyp2f1(&h1, center.norm_sq())? * center.coords()[0])
}

/// `G_α` with analytic gradient `RG_α(x) x/|x|²`; `T_α G_α = 0` off the origin,
/// which also fixes the supplied Laplacian.
pub fn green_field(k: &KernelConstants) -> Manufactured {
    let (kv, kg, kl) = (k.clone(), k.clone(), k.clone());
    let field = ScalarField::new("green", move |x: &[f64]| kernels::green_radial(&kv, x).unwrap_or(f64::NAN))
        .with_gradient(move |x: &[f64]| {
            let s = norm_sq(x);
            let rg = kernels::green_radial_derivative(&kg, x).unwrap_or(f64::NAN);
            x.iter().map(|c| rg * c / s).collect()
        })
        .with_laplacian(move |x: &[f64]| {
            let p = kl.params;
            let g = kernels::green_radial(&kl, x).unwrap_or(f64::NAN);
            let rg = kernels::green_radial_derivative(&kl, x).unwrap_or(f64::NAN);
            -(2.0 * p.alpha() * rg + p.zeroth_order() * g) / (1.0 - norm_sq(x))
        });
    Manufactured::custom(field, |_| 0.0, true)
}

/// A polynomial `Σ cₖ x^{eₖ}` with exact derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<(f64, Vec<u32>)>,
}

fn monomial(x: &[f64], e: &[u32]) -> f64 {
    x.iter().zip(e).map(|(xi, &k)| xi.powi(k as i32)).product()
}

impl Polynomial {
    pub fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, e)| c * monomial(x, e)).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..x.len())
            .map(|i| {
                self.terms
                    .iter()
                    .filter(|(_, e)| e[i] > 0)
                    .map(|(c, e)| {
                        let mut d = e.clone();
                        d[i] -= 1;
                        c * e[i] as f64 * monomial(x, &d)
                    })
                    .sum()
            })
            .collect()
    }

    pub fn laplacian(&self, x: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (c, e) in &self.terms {
            for i in 0..x.len() {
                if e[i] >= 2 {
                    let mut d = e.clone();
                    d[i] -= 2;
                    sum += c * (e[i] * (e[i] - 1)) as f64 * monomial(x, &d);
                }
            }
        }
        sum
    }

    pub fn into_field(self) -> ScalarField {
        let (pv, pg, pl) = (self.clone(), self.clone(), self);
        ScalarField::new("polynomial", move |x: &[f64]| pv.value(x))
            .with_gradient(move |x: &[f64]| pg.gradient(x))
            .with_laplacian(move |x: &[f64]| pl.laplacian(x))
    }
}
