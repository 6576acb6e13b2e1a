//! One-dimensional rules: Gauss–Jacobi by Golub–Welsch, composite
//! Gauss–Legendre panels, and adaptive Gauss–Kronrod (7, 15).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::specfun::gamma;
use crate::{Error, Result};

/// Nodes and weights of a one-dimensional rule, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// The rule mapped affinely from `[−1, 1]` to `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> Rule1d {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Rule1d {
            nodes: self.nodes.iter().map(|t| mid + half * t).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }
}

/// Gauss–Jacobi rule with `order` nodes for the weight `(1 − t)^a (1 + t)^b` on `[−1, 1]`.
pub fn gauss_jacobi(order: usize, a: f64, b: f64) -> Result<Rule1d> {
    if order == 0 {
        return Err(Error::InvalidParams("quadrature order must be positive".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidParams(format!("Jacobi exponents ({a}, {b}) must exceed -1")));
    }
    let ab = a + b;
    let mu0 = 2f64.powf(ab + 1.0) * gamma(a + 1.0)? * gamma(b + 1.0)? / gamma(ab + 2.0)?;

    let mut jac = DMatrix::<f64>::zeros(order, order);
    for k in 0..order {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < order {
            let j = kf + 1.0;
            let beta = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * j + ab;
                4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = beta.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(Rule1d {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(order: usize) -> Result<Rule1d> {
    gauss_jacobi(order, 0.0, 0.0)
}

/// Composite Gauss–Legendre rule with `order` nodes on each panel `[b_i, b_{i+1}]`.
pub fn composite_legendre(breaks: &[f64], order: usize) -> Result<Rule1d> {
    let base = gauss_legendre(order)?;
    let mut nodes = Vec::with_capacity(order * breaks.len());
    let mut weights = Vec::with_capacity(order * breaks.len());
    for pair in breaks.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::InvalidParams(format!("panel breaks must increase: {breaks:?}")));
        }
        let panel = base.mapped(pair[0], pair[1]);
        nodes.extend(panel.nodes);
        weights.extend(panel.weights);
    }
    Ok(Rule1d { nodes, weights })
}

/// Geometrically graded panel breaks on `[0, hi]`, refined toward 0: `0, t_min, t_min·ratio, …, hi`.
pub fn graded_breaks(t_min: f64, ratio: f64, hi: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut t = t_min;
    while t < hi / ratio {
        breaks.push(t);
        t *= ratio;
    }
    breaks.push(hi);
    breaks
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights attached to the odd-indexed Kronrod nodes 1, 3, 5, 7
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(mid);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let s = f(mid - dx) + f(mid + dx);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7, 15) integration of a smooth function to absolute tolerance `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 2_000;
    let (v, e) = gk15(&f, lo, hi);
    // (value, error, lo, hi); the interval with the largest error is split first
    let mut parts = vec![(v, e, lo, hi)];
    loop {
        let err: f64 = parts.iter().map(|p| p.1).sum();
        let value: f64 = parts.iter().map(|p| p.0).sum();
        if !value.is_finite() {
            return Err(Error::Domain(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        if err <= tol {
            return Ok(value);
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergence { terms: MAX_INTERVALS, tolerance: tol });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (_, _, a, b) = parts.swap_remove(worst);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&f, a, m);
        let (v2, e2) = gk15(&f, m, b);
        parts.push((v1, e1, a, m));
        parts.push((v2, e2, m, b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(10).unwrap();
        for k in 0..20 {
            let got = rule.integrate(|t| t.powi(k));
            let expected = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - expected).abs() < 1e-14, "degree {k}: {got}");
        }
    }

    #[test]
    fn jacobi_weight_mass_and_moments() {
        // ∫(1-t)^a(1+t)^b t dt = 2^{a+b+1} B(a+1,b+1) (b-a)/(a+b+2)
        let (a, b) = (0.5, -0.25);
        let rule = gauss_jacobi(12, a, b).unwrap();
        let mu0 = 2f64.powf(a + b + 1.0) * gamma(a + 1.0).unwrap() * gamma(b + 1.0).unwrap()
            / gamma(a + b + 2.0).unwrap();
        assert!((rule.weights.iter().sum::<f64>() - mu0).abs() < 1e-13);
        let m1 = rule.integrate(|t| t);
        assert!((m1 - mu0 * (b - a) / (a + b + 2.0)).abs() < 1e-13);
        assert!(rule.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn composite_panels() {
        let rule = composite_legendre(&[0.0, 0.1, 0.5, 1.0], 8).unwrap();
        assert!((rule.integrate(|t| t.exp()) - (1f64.exp() - 1.0)).abs() < 1e-14);
        assert!(composite_legendre(&[0.0, 0.0, 1.0], 4).is_err());
    }

    #[test]
    fn adaptive_handles_steep_integrands() {
        let v = integrate_adaptive(|t| 1.0 / (t * t), 1e-3, 1.0, 1e-12).unwrap();
        assert!((v - 999.0).abs() < 1e-9);
    }

    #[test]
    fn graded_breaks_shape() {
        let b = graded_breaks(1e-3, 4.0, 1.0);
        assert_eq!(b[0], 0.0);
        assert_eq!(b[1], 1e-3);
        assert_eq!(*b.last().unwrap(), 1.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
    }
}
