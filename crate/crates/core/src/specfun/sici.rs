//! Sine integral and the entire cosine integral.

use crate::quad;
use crate::{Error, Result};

const SERIES_LIMIT: f64 = 10.0;
const PANEL: f64 = 4.0 * core::f64::consts::PI;

/// `Si(x) = ∫₀ˣ sin ξ / ξ dξ` for `x ≥ 0`.
pub fn si(x: f64) -> Result<f64> {
    check("si", x)?;
    if x <= SERIES_LIMIT {
        return Ok(si_series(x));
    }
    Ok(si_series(SERIES_LIMIT) + oscillatory_tail(|u| libm::sin(u) / u, x))
}

/// `∫₀ˣ (cos ξ − 1)/ξ dξ` for `x ≥ 0`.
///
/// This is `−Cin(x)`: zero at the origin and nonpositive everywhere. It is
/// not the classical cosine integral `Ci(x) = γ + ln x − Cin(x)`.
pub fn ci_paper(x: f64) -> Result<f64> {
    check("ci_paper", x)?;
    if x <= SERIES_LIMIT {
        return Ok(-cin_series(x));
    }
    Ok(-cin_series(SERIES_LIMIT) + oscillatory_tail(|u| libm::cos(u) / u, x)
        - libm::log(x / SERIES_LIMIT))
}

fn check(function: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { function, arg: x })
    }
}

fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // (−1)^n x^{2n+1}/(2n+1)!
    let mut sum = x;
    let mut n = 0.0;
    loop {
        power *= -x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        n += 1.0;
        let term = power / (2.0 * n + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            return sum;
        }
    }
}

fn cin_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut power = 0.5 * x2; // (−1)^{n+1} x^{2n}/(2n)!
    let mut sum = 0.25 * x2;
    let mut n = 1.0;
    loop {
        power *= -x2 / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
        n += 1.0;
        let term = power / (2.0 * n);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return sum;
        }
    }
}

/// `∫_{10}^{x} f` split into panels a few periods wide.
fn oscillatory_tail<F: Fn(f64) -> f64 + Copy>(f: F, x: f64) -> f64 {
    let mut total = 0.0;
    let mut a = SERIES_LIMIT;
    while a < x {
        let b = (a + PANEL).min(x);
        total += quad::integrate(f, a, b, 1e-13)
            .map(|r| r.value)
            .unwrap_or_else(|e| match e {
                Error::QuadratureNotConverged { estimate, .. } => estimate,
                _ => f64::NAN,
            });
        a = b;
    }
    total
}
