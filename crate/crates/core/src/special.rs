//! Gamma function with reciprocal Gamma as the primitive.
//!
//! `rgamma` is entire, so the poles of Gamma at non-positive integers map to
//! exact zeros. Negative arguments go through the reflection formula
//! `Γ(1 - z) Γ(z) = π / sin(π z)`, with `sin(π z)` reduced exactly at
//! multiples of one half so half-integer arguments stay clean.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
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

/// True when `x` is 0, -1, -2, ...
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(π x)` with exact zeros at integers and exact ±1 at half-integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to [0, 2)
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.5 {
        -(PI * (r - 1.0)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

// Lanczos approximation, valid for x >= 0.5.
fn gamma_lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Reciprocal Gamma, `1 / Γ(x)`. Exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x == x.round() && x <= 171.0 {
        // positive integers: exact factorial for small values
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return 1.0 / f;
    }
    if x < 0.5 {
        sin_pi(x) * gamma_lanczos(1.0 - x) / PI
    } else {
        1.0 / gamma_lanczos(x)
    }
}

/// Gamma function; errors at the poles.
pub fn gamma(x: f64) -> Result<f64> {
    if is_gamma_pole(x) {
        return Err(Error::GammaPole { argument: x });
    }
    Ok(1.0 / rgamma(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let sqrt_pi = PI.sqrt();
        let cases = [
            (0.5, sqrt_pi),
            (1.5, sqrt_pi / 2.0),
            (2.5, 0.75 * sqrt_pi),
            (-0.5, -2.0 * sqrt_pi),
            (-1.5, 4.0 * sqrt_pi / 3.0),
            (-2.5, -8.0 * sqrt_pi / 15.0),
            (5.0, 24.0),
            (0.1, 9.513_507_698_668_732),
        ];
        for (x, want) in cases {
            let got = gamma(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-14, "Γ({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn poles_are_exact_zeros() {
        for k in 0..6 {
            assert_eq!(rgamma(-(k as f64)), 0.0);
            assert!(matches!(gamma(-(k as f64)), Err(Error::GammaPole { .. })));
        }
    }

    #[test]
    fn reflection_identity() {
        for &z in &[0.1, 0.3, 0.7, 1.25, 2.6, -0.4, -1.7] {
            let lhs = gamma(1.0 - z).unwrap() * gamma(z).unwrap();
            let rhs = PI / sin_pi(z);
            assert!(((lhs - rhs) / rhs).abs() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn recurrence() {
        for &x in &[0.3, 1.7, 3.2, -0.6, -2.3] {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(((lhs - rhs) / rhs).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn sin_pi_exact_points() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.5), -1.0);
        assert_eq!(sin_pi(1.5), -1.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        assert!((sin_pi(0.25) - (PI / 4.0).sin()).abs() < 1e-16);
        assert!((sin_pi(-1.3) - (-1.3 * PI).sin()).abs() < 1e-14);
    }
}
