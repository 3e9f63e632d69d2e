use crate::{Error, Result};

/// Natural logarithm of `Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma",
            arg: x,
        });
    }
    Ok(ln_gamma(x))
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real `x` that is not a pole.
pub(crate) fn ln_gamma_signed(x: f64) -> (f64, f64) {
    let (value, sign) = libm::lgamma_r(x);
    (value, if sign < 0 { -1.0 } else { 1.0 })
}

/// `Γ(x)` for real `x` off the poles `0, −1, −2, …`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || (x <= 0.0 && x == libm::floor(x)) {
        return Err(Error::Domain {
            function: "gamma",
            arg: x,
        });
    }
    Ok(libm::tgamma(x))
}

/// Rising factorial `(x)_k = x (x+1) ⋯ (x+k−1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x + f64::from(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn log_gamma_spot_values() {
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-15);
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-16);
        // Γ(3.5) = √π · 5!! / 2³
        let expected = (PI.sqrt() * 15.0 / 8.0).ln();
        let got = log_gamma(3.5).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn half_integer_gamma_is_double_factorial() {
        let mut double_factorial = 1.0_f64; // (2k−1)!!, (−1)!! = 1
        for k in 0..=15u32 {
            if k > 0 {
                double_factorial *= f64::from(2 * k - 1);
            }
            let scaled =
                (ln_gamma(f64::from(k) + 0.5) + f64::from(k) * 2f64.ln()).exp() / PI.sqrt();
            assert!((scaled / double_factorial - 1.0).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn pochhammer_cases() {
        assert_eq!(pochhammer(-3.0, 2), 6.0);
        assert_eq!(pochhammer(-3.0, 4), 0.0);
        assert_eq!(pochhammer(7.25, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        // (−n)_k = (−1)^k n!/(n−k)!
        assert_eq!(pochhammer(-5.0, 3), -60.0);
    }

    #[test]
    fn gamma_poles_and_negatives() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
        // Γ(1/2 − 1) = −2√π
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
        let (l, s) = ln_gamma_signed(-0.5);
        assert_eq!(s, -1.0);
        assert!((l - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
    }
}
