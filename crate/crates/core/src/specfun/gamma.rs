//! Γ on the real line: Lanczos approximation (g = 7, nine terms) with the
//! reflection formula below 1/2, and exact products at small positive integers.

use std::f64::consts::PI;

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(πx)` with exact argument reduction, so that it vanishes exactly at integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor(); // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so that t^(x+0.5) does not overflow before e^-t is applied
    let half = t.powf((x + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (-t).exp() * half * sum
}

/// The Gamma function. Errors at the poles `0, −1, −2, …`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x == x.floor() && x <= 171.0 {
        let mut prod = 1.0;
        let mut k = 2.0;
        while k < x {
            prod *= k;
            k += 1.0;
        }
        return Ok(prod);
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * lanczos(1.0 - x)))
    } else {
        Ok(lanczos(x))
    }
}

/// `1/Γ(x)`, entire: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x < 0.5 {
        sin_pi(x) * lanczos(1.0 - x) / PI
    } else {
        1.0 / gamma(x).expect("no poles for x >= 0.5")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.5).unwrap(), PI.sqrt() / 2.0) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0) < 1e-14);
    }

    #[test]
    fn poles() {
        for x in [0.0, -1.0, -2.0, -20.0] {
            assert_eq!(gamma(x), Err(Error::Pole(x)));
            assert_eq!(rgamma(x), 0.0);
        }
    }

    #[test]
    fn recurrence_over_working_range() {
        // Γ(x+1) = xΓ(x) on a grid covering [-20, 50]
        let mut x = -19.95;
        while x < 49.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}: {lhs} vs {rhs}");
            x += 0.173;
        }
    }

    #[test]
    fn half_integers_against_double_factorials() {
        // Γ(k + 1/2) = (2k)! / (4^k k!) √π
        let mut expected = PI.sqrt();
        for k in 0..40 {
            let kf = k as f64;
            let got = gamma(kf + 0.5).unwrap();
            assert!(rel(got, expected) < 1e-13, "k = {k}");
            expected *= kf + 0.5;
        }
    }
}
