//! Terminating generalized hypergeometric sums at unit argument.
//!
//! Terms are carried as (log-magnitude, sign) and combined relative to the
//! largest one, so factorial-sized intermediate factors never overflow.

use alloc::vec::Vec;

use crate::{Error, Result};

/// `Σ_{j<terms} Π(a_i)_j / Π(b_i)_j / j!`.
fn terminating_unit_sum(numer: &[f64], denom: &[f64], terms: usize) -> Result<f64> {
    let mut logs: Vec<(f64, f64)> = Vec::with_capacity(terms);
    let mut ln_mag = 0.0_f64;
    let mut sign = 1.0_f64;
    for j in 0..terms {
        if sign == 0.0 {
            break;
        }
        logs.push((ln_mag, sign));
        let jf = j as f64;
        for &a in numer {
            let factor = a + jf;
            if factor == 0.0 {
                sign = 0.0;
            } else {
                ln_mag += libm::log(factor.abs());
                sign *= factor.signum();
            }
        }
        for &b in denom {
            let factor = b + jf;
            if factor == 0.0 {
                return Err(Error::InvalidParameter {
                    what: "denominator parameter",
                    value: b,
                });
            }
            ln_mag -= libm::log(factor.abs());
            sign *= factor.signum();
        }
        ln_mag -= libm::log(jf + 1.0);
    }
    let peak = logs
        .iter()
        .map(|&(l, _)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let scaled: f64 = logs.iter().map(|&(l, s)| s * libm::exp(l - peak)).sum();
    Ok(scaled * libm::exp(peak))
}

/// `₅F₄(1, 1, 1, −k, −k−½; −k+½, −k+½, 3/2, 2; 1)`.
///
/// The numerator parameter `−k` cuts the series after `k + 1` terms, and
/// the half-integer denominator parameters never vanish.
pub fn hyp5f4_unit(k: u32) -> f64 {
    let kf = f64::from(k);
    terminating_unit_sum(
        &[1.0, 1.0, 1.0, -kf, -kf - 0.5],
        &[-kf + 0.5, -kf + 0.5, 1.5, 2.0],
        k as usize + 1,
    )
    .expect("half-integer denominators never vanish")
}

/// `₃F₂(−n, ½, a/2; −n+½, a/2+1; 1)` for `a ∉ {0, −1, −2, …}`.
pub fn hyp3f2_unit_terminating(n: u32, a: f64) -> Result<f64> {
    if !a.is_finite() || (a <= 0.0 && a == libm::floor(a)) {
        return Err(Error::InvalidParameter { what: "a", value: a });
    }
    let nf = f64::from(n);
    terminating_unit_sum(
        &[-nf, 0.5, 0.5 * a],
        &[-nf + 0.5, 0.5 * a + 1.0],
        n as usize + 1,
    )
}
