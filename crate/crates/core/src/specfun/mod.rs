//! Special functions on the real line: Γ and the Gauss hypergeometric ₂F₁.

mod gamma;
mod hypergeometric;

pub use gamma::{gamma, rgamma};
pub use hypergeometric::{
    hyp2f1, hyp2f1_at_one, hyp2f1_complement, hyp2f1_derivative, limit_ratio_at_one, ode_operator,
    ode_residual, solutions_at_one, HypParams, ACCURACY, MAX_TERMS, NEAR_INTEGER, ODE_FD_STEP,
};
