//! Bessel functions of the first kind, integer and half-integer order.
//!
//! For `x ≤ 1` the ascending power series is used. Above that, Miller's
//! backward recurrence runs from an order well past `max(ν, x)` and is
//! normalized either by `J₀ + 2ΣJ₂ₖ = 1` (integer orders) or by the closed
//! forms of `J_{±1/2}` (half-integer orders), whichever of the two is larger
//! in magnitude at `x`.

use core::f64::consts::PI;

use crate::specfun::ln_gamma;
use crate::{Error, Result};

/// Order of a Bessel function, represented exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// `ν = n`.
    Integer(u32),
    /// `ν = n + 1/2`.
    HalfInteger(u32),
}

impl Order {
    pub fn value(self) -> f64 {
        match self {
            Order::Integer(n) => f64::from(n),
            Order::HalfInteger(n) => f64::from(n) + 0.5,
        }
    }
}

/// `J_ν(x)` for `x ≥ 0`.
pub fn bessel_j(order: Order, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "bessel_j",
            arg: x,
        });
    }
    Ok(bessel_j_unchecked(order, x))
}

pub(crate) fn bessel_j_unchecked(order: Order, x: f64) -> f64 {
    if x == 0.0 {
        return if order == Order::Integer(0) { 1.0 } else { 0.0 };
    }
    if x <= 1.0 {
        return ascending_series(order.value(), x);
    }
    match order {
        Order::HalfInteger(0) => libm::sqrt(2.0 / (PI * x)) * libm::sin(x),
        Order::HalfInteger(1) => {
            libm::sqrt(2.0 / (PI * x)) * (libm::sin(x) / x - libm::cos(x))
        }
        Order::HalfInteger(n) => miller_half_integer(n, x),
        Order::Integer(n) => miller_integer(n, x),
    }
}

fn ascending_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = libm::exp(nu * libm::log(half) - ln_gamma(nu + 1.0));
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term: f64 = 1.0;
    let mut sum: f64 = 1.0;
    let mut m = 0.0;
    while term.abs() > 1e-17 * sum.abs() {
        m += 1.0;
        term *= q / (m * (m + nu));
        sum += term;
    }
    lead * sum
}

const RESCALE_AT: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

fn start_index(nu: f64, x: f64) -> u32 {
    let m = nu.max(x);
    let start = m + 2.0 * libm::sqrt(40.0 * m) + 20.0;
    libm::ceil(start) as u32
}

fn miller_integer(n: u32, x: f64) -> f64 {
    let mut top = start_index(f64::from(n), x);
    if top % 2 == 1 {
        top += 1;
    }
    let two_over_x = 2.0 / x;
    let mut above = 0.0; // f_{k+1}
    let mut current = 1.0; // f_k
    let mut target = 0.0;
    let mut norm = 0.0; // 2 Σ f_{2j}, j ≥ 1
    for k in (1..=top).rev() {
        if k == n {
            target = current;
        }
        if k % 2 == 0 {
            norm += 2.0 * current;
        }
        let below = f64::from(k) * two_over_x * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            target *= RESCALE_BY;
            norm *= RESCALE_BY;
        }
    }
    if n == 0 {
        target = current;
    }
    norm += current;
    target / norm
}

fn miller_half_integer(n: u32, x: f64) -> f64 {
    // index k stands for order k + 1/2; the sweep ends at k = −1
    let top = start_index(f64::from(n) + 0.5, x);
    let mut above = 0.0;
    let mut current = 1.0;
    let mut target = 0.0;
    let mut f_half = 0.0;
    for k in (0..=top).rev() {
        if k == n {
            target = current;
        }
        if k == 0 {
            f_half = current;
        }
        let nu = f64::from(k) + 0.5;
        let below = 2.0 * nu / x * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            target *= RESCALE_BY;
            f_half *= RESCALE_BY;
        }
    }
    let f_minus_half = current;
    let amplitude = libm::sqrt(2.0 / (PI * x));
    let (s, c) = (libm::sin(x), libm::cos(x));
    let scale = if s.abs() >= c.abs() {
        amplitude * s / f_half
    } else {
        amplitude * c / f_minus_half
    };
    target * scale
}
