//! Potential theory of the weighted Laplacian
//!
//! ```text
//! T_α u(x) = (1 − |x|²) Δu(x) + 2α ⟨x, ∇u(x)⟩ + (n − 2 − α) α u(x),   |x| < 1, α > −1
//! ```
//!
//! on the unit ball of ℝⁿ (n ≥ 3).
//!
//! The crate is organized bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`specfun`] | Γ, Gauss ₂F₁ on the real line, values and limits at z = 1, solutions about z = 1 |
//! | [`moebius`] | ball/sphere points, the bracket `[x,a]`, the involutions φₐ, conformal factors |
//! | [`operators`] | T_α, Δ_γ, Δ_h and the radial derivative on scalar fields |
//! | [`corpus`] | closed-form test fields with analytic derivatives and T_α images |
//! | [`kernels`] | Poisson kernel P_α, Green function G_α, hyperbolic g / G_h / P_h, constants |
//! | [`quadrature`] | sphere, ball and annulus rules; Gauss–Jacobi; adaptive Gauss–Kronrod |
//! | [`solver`] | P_α[φ] + G_α[ψ], mean-value and Green identities, manufactured-solution reports |
//! | [`estimates`] | boundary asymptotics of singular sphere integrals and gradient probes |
//!
//! All sphere integrals use the normalized measure σ (σ(𝕊ⁿ⁻¹) = 1) unless a
//! function says otherwise.
//!
//! ```
//! use talpha::{kernels, Params};
//!
//! let p = Params::new(3, 0.0)?;
//! let k = kernels::constants(&p)?;
//! assert!((k.c_alpha_calibrated - 1.0).abs() < 1e-12);
//! assert_eq!(k.c_alpha_paper, -2.0);
//! # Ok::<(), talpha::Error>(())
//! ```

pub mod corpus;
pub mod estimates;
pub mod kernels;
pub mod moebius;
pub mod operators;
pub mod quadrature;
pub mod solver;
pub mod specfun;

#[doc(hidden)]
pub mod cli;

mod error;
mod params;

pub use error::{Error, Result};
pub use moebius::{BallPoint, SpherePoint};
pub use operators::ScalarField;
pub use params::{ball_volume, sphere_area, Params};

/// Library version embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
