//! Conditional characteristic functions `H₀..H₃` of the flight and the
//! small-time asymptotic characteristic function.
//!
//! All of them are radial: they depend on the frequency vector only through
//! `x = ct‖α‖`. The imaginary parts vanish by point symmetry, so every
//! function here is real.

use core::f64::consts::PI;

use crate::arctan::quartic_gamma;
use crate::model::{check_time, FlightParams, SeriesTruncation};
use crate::series::sum_terms;
use crate::specfun::{bessel_j_unchecked, ci_paper, hyp5f4_unit, ln_gamma, si, Order};
use crate::{Error, Result};

/// Below this `x = ct‖α‖` the ratio forms are replaced by Taylor limits.
pub const SMALL_ARGUMENT: f64 = 1e-3;

/// A radial frequency `‖α‖` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqQuery {
    alpha_norm: f64,
    t: f64,
}

impl FreqQuery {
    pub fn new(alpha_norm: f64, t: f64) -> Result<Self> {
        if !alpha_norm.is_finite() {
            return Err(Error::NonFinite { field: "alpha_norm" });
        }
        if alpha_norm < 0.0 {
            return Err(Error::InvalidParameter {
                what: "alpha_norm",
                value: alpha_norm,
            });
        }
        check_time(t)?;
        Ok(FreqQuery { alpha_norm, t })
    }

    pub fn alpha_norm(&self) -> f64 {
        self.alpha_norm
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The dimensionless argument `ct‖α‖`.
    pub fn argument(&self, p: &FlightParams) -> f64 {
        p.radius(self.t) * self.alpha_norm
    }
}

/// No switch: the uniform law on the sphere of radius `ct`, `sin x / x`.
pub fn h0(q: &FreqQuery, p: &FlightParams) -> f64 {
    let x = q.argument(p);
    if x < SMALL_ARGUMENT {
        return 1.0 - x * x / 6.0;
    }
    libm::sin(x) / x
}

/// One switch: `[sin x Si(2x) + cos x Ci(2x)] / x²`, with the entire cosine
/// integral.
pub fn h1(q: &FreqQuery, p: &FlightParams) -> f64 {
    let x = q.argument(p);
    if x < SMALL_ARGUMENT {
        return 1.0 - x * x / 9.0;
    }
    let two_x = 2.0 * x;
    // both arguments are finite and nonnegative here
    let s = si(two_x).unwrap_or(f64::NAN);
    let c = ci_paper(two_x).unwrap_or(f64::NAN);
    (libm::sin(x) * s + libm::cos(x) * c) / (x * x)
}

/// Two switches:
/// `Σ_k x^{k−1} / (2^{k−1} k! (2k+1)²) · ₅F₄(k) · J_{k+1}(x)`.
pub fn h2_series(q: &FreqQuery, p: &FlightParams, trunc: &SeriesTruncation) -> Result<f64> {
    let x = q.argument(p);
    if x < SMALL_ARGUMENT {
        return Ok(1.0 - x * x / 12.0);
    }
    let log_half_x = libm::log(0.5 * x);
    let sum = sum_terms(
        trunc,
        |k| {
            let kf = k as f64;
            let scale = libm::exp((kf - 1.0) * log_half_x - ln_gamma(kf + 1.0))
                / ((2.0 * kf + 1.0) * (2.0 * kf + 1.0));
            scale * hyp5f4_unit(k as u32) * bessel_j_unchecked(Order::Integer(k as u32 + 1), x)
        },
        // J_{k+1} is still oscillating while k+1 ≤ x and may pass near a zero
        |k| (k + 1) as f64 > x,
    );
    converged("h2_series", sum)
}

/// Three switches:
/// `3π^{3/2} Σ_k γ_k x^{k−3/2} / (2^{k+3/2} (k+1)!) · J_{k+3/2}(x)`.
pub fn h3_series(q: &FreqQuery, p: &FlightParams, trunc: &SeriesTruncation) -> Result<f64> {
    let x = q.argument(p);
    if x < SMALL_ARGUMENT {
        return Ok(1.0 - x * x / 15.0);
    }
    let log_half_x = libm::log(0.5 * x);
    // x^{k−3/2}/2^{k+3/2} = (x/2)^{k−3/2} / 8
    let sum = sum_terms(
        trunc,
        |k| {
            let kf = k as f64;
            let scale = libm::exp((kf - 1.5) * log_half_x - ln_gamma(kf + 2.0)) / 8.0;
            scale * quartic_gamma(k) * bessel_j_unchecked(Order::HalfInteger(k as u32 + 1), x)
        },
        |k| (k as f64 + 1.5) > x,
    );
    converged("h3_series", sum).map(|s| 3.0 * PI * libm::sqrt(PI) * s)
}

fn converged(series: &'static str, sum: crate::series::SeriesSum) -> Result<f64> {
    if sum.converged && sum.value.is_finite() {
        Ok(sum.value)
    } else {
        Err(Error::TruncationNotConverged {
            series,
            terms: sum.terms,
            last_term: sum.last_term,
        })
    }
}

/// Small-time asymptotic characteristic function of `X(t)`:
///
/// ```text
/// e^{−λt} [ H₀ + λt H₁ + (λt)² J₁(x)/x + (λt)³ √π J_{3/2}(x) / (2x)^{3/2} ]
/// ```
///
/// The error is `o(t³)` as `t → 0`.
pub fn h_asymptotic(q: &FreqQuery, p: &FlightParams) -> f64 {
    let x = q.argument(p);
    let lt = p.lambda() * q.t;
    let (two, three) = if x < SMALL_ARGUMENT {
        let x2 = x * x;
        (0.5 - x2 / 16.0, (1.0 - x2 / 10.0) / 6.0)
    } else {
        let j1 = bessel_j_unchecked(Order::Integer(1), x);
        let j32 = bessel_j_unchecked(Order::HalfInteger(1), x);
        (j1 / x, libm::sqrt(PI) * j32 / libm::pow(2.0 * x, 1.5))
    };
    libm::exp(-lt) * (h0(q, p) + lt * h1(q, p) + lt * lt * two + lt * lt * lt * three)
}

/// `e^{−λt} Σ_{k≤3} (λt)^k/k! · H_k`: the characteristic function with the
/// contribution of four or more switches dropped.
pub fn conditional_mixture(
    q: &FreqQuery,
    p: &FlightParams,
    trunc: &SeriesTruncation,
) -> Result<f64> {
    let lt = p.lambda() * q.t;
    let h = [h0(q, p), h1(q, p), h2_series(q, p, trunc)?, h3_series(q, p, trunc)?];
    let weights = [1.0, lt, lt * lt / 2.0, lt * lt * lt / 6.0];
    let total: f64 = h.iter().zip(weights).map(|(hk, w)| hk * w).sum();
    Ok(libm::exp(-lt) * total)
}
