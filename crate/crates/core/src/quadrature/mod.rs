//! Quadrature on the sphere, the ball and annuli.
//!
//! * [`SphereRule`]: normalized measure σ on 𝕊ⁿ⁻¹, either a product rule
//!   (Gauss–Jacobi in the polar cosines, trapezoid in the azimuth) or a rule
//!   graded toward a pole for integrands peaked at one boundary point;
//! * [`BallRule`]: Lebesgue measure on `ρ𝔹ⁿ` or an annulus, radial Gauss
//!   panels split at `{10⁻³, 0.1, 0.9}·ρ` times a sphere rule;
//! * [`gauss`]: the one-dimensional building blocks and adaptive Gauss–Kronrod.
//!
//! All sums run in a fixed node order, so results are bit-reproducible.

mod ball;
mod cache;
pub mod gauss;
mod sphere;

pub use ball::{integrate_ball, BallRule, RADIAL_BREAKS};
pub use cache::{cache_dir, cached_sphere_rule, from_csv, load_or_build_in, to_csv, CACHE_ENV};
pub use sphere::{integrate_sphere, Grading, SphereRule};
