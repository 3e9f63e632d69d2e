//! Small-time transition density of the flight, subball probabilities and
//! the total mass of the absolutely continuous part.
//!
//! For `r = ‖x‖ < ct` the absolutely continuous part is, up to `o(t³)`,
//!
//! ```text
//! e^{−λt} [ λ/(4πc²t r) · ln((ct+r)/(ct−r))
//!         + λ²/(2π²c² √(c²t²−r²))
//!         + λ³/(8πc³) ]
//! ```
//!
//! and it vanishes outside the open ball. The three bracketed terms come from
//! one, two and three switches; they integrate over the ball to `λt`,
//! `(λt)²/2` and `(λt)³/6`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::model::{check_time, DensityValue, FlightParams, SeriesTruncation, Vec3};
use crate::series::sum_terms;
use crate::{Error, Result};

/// Radii below this fraction of `ct` use the limit of the logarithmic term.
const ORIGIN_SWITCH: f64 = 1e-9;

/// Bracketed terms of the density (without the factor `e^{−λt}`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcComponents {
    pub single: f64,
    pub double: f64,
    pub triple: f64,
}

impl AcComponents {
    pub fn sum(&self) -> f64 {
        self.single + self.double + self.triple
    }
}

/// Values on a uniform radial grid inside the ball.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialProfile {
    pub t: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

/// Mass `e^{−λt}` of the uniform law on the sphere of radius `ct`.
pub fn singular_weight(t: f64, p: &FlightParams) -> Result<f64> {
    check_time(t)?;
    Ok(libm::exp(-p.lambda() * t))
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFinite { field: "r" });
    }
    if r < 0.0 {
        return Err(Error::InvalidParameter { what: "r", value: r });
    }
    Ok(())
}

/// The three terms of the density at radius `r`; all zero for `r ≥ ct`.
pub fn ac_components(r: f64, t: f64, p: &FlightParams) -> Result<AcComponents> {
    check_time(t)?;
    check_radius(r)?;
    let radius = p.radius(t);
    if r >= radius {
        return Ok(AcComponents {
            single: 0.0,
            double: 0.0,
            triple: 0.0,
        });
    }
    Ok(components_with_gap(r, radius - r, t, p))
}

/// Density terms at `r`, given the distance `gap = ct − r` to the sphere
/// separately so that callers can supply it without cancellation.
pub(crate) fn components_with_gap(r: f64, gap: f64, t: f64, p: &FlightParams) -> AcComponents {
    let (c, lambda) = (p.c(), p.lambda());
    let radius = c * t;
    let single = if r < ORIGIN_SWITCH * radius {
        lambda / (2.0 * PI * c * c * c * t * t)
    } else {
        let log_ratio = if r < 0.5 * radius {
            2.0 * libm::atanh(r / radius)
        } else {
            libm::log((radius + r) / gap)
        };
        lambda / (4.0 * PI * c * c * t * r) * log_ratio
    };
    let root = libm::sqrt(gap * (radius + r));
    AcComponents {
        single,
        double: lambda * lambda / (2.0 * PI * PI * c * c * root),
        triple: lambda * lambda * lambda / (8.0 * PI * c * c * c),
    }
}

/// Absolutely continuous part of the density at `‖x‖ = r`.
pub fn ac_density(r: f64, t: f64, p: &FlightParams) -> Result<f64> {
    let parts = ac_components(r, t, p)?;
    Ok(libm::exp(-p.lambda() * t) * parts.sum())
}

/// Both parts of the law of `X(t)` as seen from the point `x`.
pub fn density_at(x: Vec3, t: f64, p: &FlightParams) -> Result<DensityValue> {
    if !x.is_finite() {
        return Err(Error::NonFinite { field: "x" });
    }
    Ok(DensityValue {
        atom_radius: p.radius(t),
        atom_mass: singular_weight(t, p)?,
        ac_value: ac_density(x.norm(), t, p)?,
    })
}

/// `Σ_{k≥1} w^k/(4k²−1)` for `0 ≤ w ≤ 1`.
///
/// Above `w = 1/2` the partial fractions are regrouped into
/// `1/2 − (1−w)/2 · Σ_{j≥0} w^j/(2j+1)`, whose terms carry the factor `1−w`
/// and so stay small as `w → 1`.
fn subball_series(w: f64, trunc: &SeriesTruncation) -> f64 {
    if w <= 0.5 {
        let mut power = 1.0;
        sum_terms(
            trunc,
            |k| {
                power *= w;
                let kf = (k + 1) as f64;
                power / (4.0 * kf * kf - 1.0)
            },
            |_| true,
        )
        .value
    } else {
        let gap = 1.0 - w;
        let mut power = gap;
        let tail = sum_terms(
            trunc,
            |j| {
                let term = power / (2 * j + 1) as f64;
                power *= w;
                term
            },
            |_| true,
        );
        0.5 - 0.5 * tail.value
    }
}

/// `Pr{‖X(t)‖ ≤ r}` from the asymptotic density, for `0 ≤ r < ct`:
///
/// ```text
/// e^{−λt} [ (2λr/c) Σ_{k≥1} ρ^{2k}/(4k²−1)
///         + (λ²t²/π)(arcsin ρ − ρ√(1−ρ²))
///         + λ³r³/(6c³) ],   ρ = r/(ct).
/// ```
pub fn ball_prob_asymptotic(
    r: f64,
    t: f64,
    p: &FlightParams,
    trunc: &SeriesTruncation,
) -> Result<f64> {
    check_time(t)?;
    check_radius(r)?;
    let radius = p.radius(t);
    if r >= radius {
        return Err(Error::RadiusOutsideBall { r, radius });
    }
    let (c, lambda) = (p.c(), p.lambda());
    let rho = (r / radius).min(1.0);
    let series = subball_series(rho * rho, trunc);
    let arc = libm::asin(rho) - rho * libm::sqrt((1.0 - rho) * (1.0 + rho));
    let lt = lambda * t;
    let bracket = 2.0 * lambda * r / c * series
        + lt * lt / PI * arc
        + lambda * lambda * lambda * r * r * r / (6.0 * c * c * c);
    Ok(libm::exp(-lt) * bracket)
}

/// `G(t) = 1 − e^{−λt}`, the exact mass of the absolutely continuous part.
pub fn g_exact(t: f64, p: &FlightParams) -> Result<f64> {
    check_time(t)?;
    Ok(-libm::expm1(-p.lambda() * t))
}

/// `G̃(t) = e^{−λt}(λt + (λt)²/2 + (λt)³/6)`, the mass of the asymptotic
/// density.
pub fn g_tilde(t: f64, p: &FlightParams) -> Result<f64> {
    check_time(t)?;
    let lt = p.lambda() * t;
    Ok(libm::exp(-lt) * lt * (1.0 + lt / 2.0 + lt * lt / 6.0))
}

/// `Pr{N(t) ≥ 4}` for the Poisson switch count, i.e. `G(t) − G̃(t)`.
pub fn switch_tail_error(t: f64, p: &FlightParams) -> Result<f64> {
    check_time(t)?;
    let lt = p.lambda() * t;
    if lt < 0.5 {
        // e^{−x} Σ_{k≥4} x^k/k! summed directly to avoid cancellation
        let mut term = lt * lt * lt * lt / 24.0;
        let mut sum = 0.0;
        let mut k = 4.0;
        while term > 1e-18 * sum {
            sum += term;
            k += 1.0;
            term *= lt / k;
        }
        Ok(libm::exp(-lt) * sum)
    } else {
        Ok(g_exact(t, p)? - g_tilde(t, p)?)
    }
}

/// `ac_density` on `n_points` equally spaced radii in `[0, r_max]`.
pub fn radial_profile(
    t: f64,
    p: &FlightParams,
    n_points: usize,
    r_max: f64,
) -> Result<RadialProfile> {
    check_time(t)?;
    check_radius(r_max)?;
    if n_points < 2 {
        return Err(Error::InvalidConfig("a profile needs at least 2 points"));
    }
    let radius = p.radius(t);
    if r_max >= radius {
        return Err(Error::RadiusOutsideBall { r: r_max, radius });
    }
    let step = r_max / (n_points - 1) as f64;
    let radii: Vec<f64> = (0..n_points)
        .map(|i| if i + 1 == n_points { r_max } else { i as f64 * step })
        .collect();
    let values = radii
        .iter()
        .map(|&r| ac_density(r, t, p))
        .collect::<Result<Vec<f64>>>()?;
    Ok(RadialProfile { t, radii, values })
}
