//! Independent reference values for the integration tests.

#![allow(dead_code)]

use rug::Float;

const PREC: u32 = 256;

/// ₂F₁(a, b; c; z) by the defining series in 256-bit binary floating point, so
/// cancellation between large alternating terms does not reach f64 precision.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    assert!(z.abs() < 1.0, "series oracle needs |z| < 1");
    let f = |v: f64| Float::with_val(PREC, v);
    let (a, b, c, z) = (f(a), f(b), f(c), f(z));
    let mut term = f(1.0);
    let mut sum = f(1.0);
    let mut quiet = 0;
    for k in 0..200_000u32 {
        let num = Float::with_val(PREC, &a + k) * Float::with_val(PREC, &b + k);
        let den = Float::with_val(PREC, &c + k) * (k + 1);
        term = term * num / den * &z;
        sum += &term;
        if term.is_zero() || Float::with_val(PREC, term.abs_ref()) <= Float::with_val(PREC, sum.abs_ref()) * 1e-40 {
            quiet += 1;
            if quiet == 3 {
                return sum.to_f64();
            }
        } else {
            quiet = 0;
        }
    }
    panic!("series oracle did not converge");
}

/// ∫ f over `[lo, hi]` by composite Simpson with `panels` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (hi - lo) / panels as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + h * i as f64);
    }
    s * h / 3.0
}

/// Mean over 𝕊² of a zonal function `f(t)`, `t = ⟨ζ, pole⟩`: `½ ∫₋₁¹ f(t) dt`.
pub fn zonal_mean_s2<F: Fn(f64) -> f64>(f: F, panels: usize) -> f64 {
    0.5 * simpson(f, -1.0, 1.0, panels)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `φ_a(x)` from the explicit formula, component by component.
pub fn moebius_reference(a: &[f64], x: &[f64]) -> Vec<f64> {
    let aa: f64 = a.iter().map(|v| v * v).sum();
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let ax: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
    let d2 = aa + xx - 2.0 * ax;
    let b2 = 1.0 + aa * xx - 2.0 * ax;
    a.iter().zip(x).map(|(ai, xi)| (ai * d2 - (1.0 - aa) * (xi - ai)) / b2).collect()
}
