//! Series for the powers `arctan(z)^n`, `n = 1..4`, in the variable
//! `w = z²/(1+z²)`.
//!
//! Each power has the shape
//!
//! ```text
//! arctan(z)^n = (z/√(1+z²))^n · Σ_k a_k^{(n)} w^k
//! ```
//!
//! with
//!
//! | n | `a_k^{(n)}` |
//! |---|-------------|
//! | 1 | `Γ(k+½) / (√π k! (2k+1))` |
//! | 2 | `(√π/2) k! / ((k+1) Γ(k+3/2))` |
//! | 3 | `Γ(k+½) ₅F₄(…;1) / (√π k! (2k+1))`, see [`hyp5f4_unit`] |
//! | 4 | `(π/2) γ_k`, see [`quartic_gamma`] |
//!
//! Since `|w| < 1` for every finite real `z`, all four series converge; the
//! tail after `K` terms is bounded by a geometric series in `w`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::model::SeriesTruncation;
use crate::series::sum_terms;
use crate::specfun::{hyp5f4_unit, ln_gamma, ln_gamma_signed};
use crate::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// One coefficient of an arctangent-power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArctanSeriesTerm {
    pub k: usize,
    pub coefficient: f64,
    /// Power of `w = z²/(1+z²)` multiplying the coefficient.
    pub ratio_power: usize,
}

/// Coefficient `a_k^{(n)}` of the series for `arctan(z)^n`.
pub fn arctan_coefficient(n: u32, k: usize) -> Result<f64> {
    let kf = k as f64;
    let base = || libm::exp(ln_gamma(kf + 0.5) - ln_gamma(kf + 1.0)) / (2.0 * kf + 1.0);
    match n {
        1 => Ok(base() / SQRT_PI),
        2 => Ok(0.5
            * SQRT_PI
            * libm::exp(ln_gamma(kf + 1.0) - ln_gamma(kf + 1.5))
            / (kf + 1.0)),
        3 => Ok(base() * hyp5f4_unit(k as u32) / SQRT_PI),
        4 => Ok(0.5 * PI * quartic_gamma(k)),
        other => Err(Error::UnsupportedPower(other)),
    }
}

/// The first `count` terms of the series for `arctan(z)^n`.
pub fn arctan_series_terms(n: u32, count: usize) -> Result<Vec<ArctanSeriesTerm>> {
    (0..count)
        .map(|k| {
            arctan_coefficient(n, k).map(|coefficient| ArctanSeriesTerm {
                k,
                coefficient,
                ratio_power: k,
            })
        })
        .collect()
}

/// `arctan(z)^n` evaluated through its series in `w = z²/(1+z²)`.
pub fn arctan_pow(n: u32, z: f64, trunc: &SeriesTruncation) -> Result<f64> {
    if !(1..=4).contains(&n) {
        return Err(Error::UnsupportedPower(n));
    }
    if !z.is_finite() {
        return Err(Error::NonFinite { field: "z" });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    // 1/(1 + 1/z²) stays finite for huge |z|
    let w = 1.0 / (1.0 + 1.0 / (z * z));
    let prefactor = libm::pow(libm::copysign(libm::sqrt(w), z), f64::from(n));
    let mut w_power = 1.0;
    let sum = sum_terms(
        trunc,
        |k| {
            let term = arctan_coefficient(n, k).unwrap_or(f64::NAN) * w_power;
            w_power *= w;
            term
        },
        |_| true,
    );
    Ok(prefactor * sum.value)
}

/// `γ_k = 1/(k+2) Σ_{l=0}^{k} l! (k−l)! / ((l+1) Γ(l+3/2) Γ(k−l+3/2))`.
///
/// These are the coefficients of `arctan(z)^4` (up to the factor `π/2`) and
/// of the three-switch characteristic function. `γ₀ = 2/π`.
pub fn quartic_gamma(k: usize) -> f64 {
    let kf = k as f64;
    let sum: f64 = (0..=k)
        .map(|l| {
            let lf = l as f64;
            let rest = kf - lf;
            libm::exp(
                ln_gamma(lf + 1.0) + ln_gamma(rest + 1.0)
                    - ln_gamma(lf + 1.5)
                    - ln_gamma(rest + 1.5),
            ) / (lf + 1.0)
        })
        .sum();
    sum / (kf + 2.0)
}

/// Both sides of the gamma-sum identity
///
/// ```text
/// Σ_{k=0}^{n} Γ(k+½) Γ(n−k+½) / (k! (n−k)! (2k+a))
///     = π Γ(a/2) Γ(n+(a+1)/2) / ((2n+a) Γ((a+1)/2) Γ(n+a/2)),
/// ```
///
/// valid for real `a ∉ {0, −1, −2, …}`. Returns `(lhs, rhs)`.
pub fn lemma_a1_check(n: u32, a: f64) -> Result<(f64, f64)> {
    if !a.is_finite() || (a <= 0.0 && a == libm::floor(a)) {
        return Err(Error::InvalidParameter { what: "a", value: a });
    }
    let nf = f64::from(n);
    let lhs: f64 = (0..=n)
        .map(|k| {
            let kf = f64::from(k);
            libm::exp(
                ln_gamma(kf + 0.5) + ln_gamma(nf - kf + 0.5)
                    - ln_gamma(kf + 1.0)
                    - ln_gamma(nf - kf + 1.0),
            ) / (2.0 * kf + a)
        })
        .sum();

    let (l1, s1) = ln_gamma_signed(0.5 * a);
    let (l2, s2) = ln_gamma_signed(nf + 0.5 * (a + 1.0));
    let (l3, s3) = ln_gamma_signed(0.5 * (a + 1.0));
    let (l4, s4) = ln_gamma_signed(nf + 0.5 * a);
    let denom = 2.0 * nf + a;
    let rhs = s1 * s2 * s3 * s4 * PI * libm::exp(l1 + l2 - l3 - l4) / denom;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc(terms: usize) -> SeriesTruncation {
        SeriesTruncation::new(terms, 1e-14).unwrap()
    }

    #[test]
    fn arctan_one_is_quarter_pi() {
        let v = arctan_pow(1, 1.0, &trunc(60)).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn squared_and_fourth_powers() {
        let z: f64 = 0.7;
        let v = arctan_pow(2, z, &SeriesTruncation::default()).unwrap();
        assert!((v - z.atan().powi(2)).abs() < 1e-12);
        let z: f64 = 3.0;
        let v = arctan_pow(4, z, &SeriesTruncation::default()).unwrap();
        assert!((v - z.atan().powi(4)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn odd_powers_are_odd() {
        let t = SeriesTruncation::default();
        for n in 1..=4 {
            let plus = arctan_pow(n, 1.3, &t).unwrap();
            let minus = arctan_pow(n, -1.3, &t).unwrap();
            let parity = if n % 2 == 1 { -1.0 } else { 1.0 };
            assert!((minus - parity * plus).abs() < 1e-15);
        }
    }

    #[test]
    fn unsupported_powers() {
        let t = SeriesTruncation::default();
        assert_eq!(arctan_pow(0, 1.0, &t), Err(Error::UnsupportedPower(0)));
        assert_eq!(arctan_pow(5, 1.0, &t), Err(Error::UnsupportedPower(5)));
        assert!(arctan_coefficient(7, 0).is_err());
    }

    #[test]
    fn quartic_gamma_leading_values() {
        assert!((quartic_gamma(0) - 2.0 / PI).abs() < 1e-14);
        assert!((quartic_gamma(1) - 4.0 / (3.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn quartic_gamma_positive_decreasing() {
        let values: Vec<f64> = (0..=50).map(quartic_gamma).collect();
        assert!(values.iter().all(|&g| g > 0.0));
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn squared_coefficients_are_self_convolution() {
        // a_k^{(2)} = Σ_l a_l^{(1)} a_{k−l}^{(1)}
        for k in 0..25 {
            let conv: f64 = (0..=k)
                .map(|l| arctan_coefficient(1, l).unwrap() * arctan_coefficient(1, k - l).unwrap())
                .sum();
            let direct = arctan_coefficient(2, k).unwrap();
            assert!(((conv - direct) / direct).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn lemma_a1_small_cases() {
        let (lhs, rhs) = lemma_a1_check(0, 1.0).unwrap();
        assert!((lhs - PI).abs() < 1e-14 && (rhs - PI).abs() < 1e-14);
        let (lhs, rhs) = lemma_a1_check(3, 2.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        let (lhs, rhs) = lemma_a1_check(12, 0.5).unwrap();
        assert!(((lhs - rhs) / rhs).abs() < 1e-11);
    }

    #[test]
    fn lemma_a1_negative_noninteger_a() {
        for &a in &[-0.5, -1.5, -3.25] {
            for n in 0..8 {
                let (lhs, rhs) = lemma_a1_check(n, a).unwrap();
                assert!(((lhs - rhs) / rhs).abs() < 1e-11, "n={n} a={a}: {lhs} {rhs}");
            }
        }
    }

    #[test]
    fn lemma_a1_excluded_values() {
        for a in [0.0, -1.0, -2.0, f64::NAN] {
            assert!(lemma_a1_check(2, a).is_err());
        }
    }

    #[test]
    fn coefficient_sum_bound_via_extrapolation() {
        // Σ_k Γ(k+½)/(k!(2k+1)) = π^{3/2}/2. The tail after K terms decays
        // like K^{-1/2}, so three partial sums are Richardson-extrapolated.
        let partial = |terms: usize| -> f64 {
            (0..terms)
                .map(|k| arctan_coefficient(1, k).unwrap() * SQRT_PI)
                .sum()
        };
        let (k1, k2, k3) = (10_000, 40_000, 160_000);
        let (s1, s2, s3) = (partial(k1), partial(k2), partial(k3));
        // eliminate the K^{-1/2} and K^{-3/2} tail terms
        let r1 = (2.0 * s2 - s1) / 1.0;
        let r2 = (2.0 * s3 - s2) / 1.0;
        let extrapolated = (8.0 * r2 - r1) / 7.0;
        let target = PI * SQRT_PI / 2.0;
        assert!(s1 < target && s2 < target && s3 < target);
        assert!((extrapolated - target).abs() < 1e-8, "{}", extrapolated - target);
    }
}
