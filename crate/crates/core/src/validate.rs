//! Quadrature of the asymptotic density over the ball and over subballs.
//!
//! Radii are parametrized as `r = ct·cos φ`, `φ ∈ [0, π/2]`. Then
//! `dr = ct sin φ dφ` cancels the inverse square root of the two-switch
//! term, and the distance to the sphere `ct − r = 2ct sin²(φ/2)` is known
//! without cancellation, so the logarithmic term is resolved by bisection
//! toward `φ = 0`.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::density::{components_with_gap, AcComponents};
use crate::model::{check_time, FlightParams};
use crate::quad;
use crate::{Error, Result};

/// Ball integrals of the three density terms (without `e^{−λt}`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentIntegrals {
    pub single: f64,
    pub double: f64,
    pub triple: f64,
}

/// `4πr² · components(r) · dr/dφ` at angle `φ`.
fn weighted_components(phi: f64, t: f64, p: &FlightParams) -> AcComponents {
    let radius = p.radius(t);
    let r = radius * libm::cos(phi);
    let half = libm::sin(0.5 * phi);
    let gap = 2.0 * radius * half * half;
    let jacobian = 4.0 * PI * r * r * radius * libm::sin(phi);
    let parts = components_with_gap(r, gap, t, p);
    AcComponents {
        single: parts.single * jacobian,
        double: parts.double * jacobian,
        triple: parts.triple * jacobian,
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig("tolerance must be positive and finite"))
    }
}

fn integrate_phi<F: Fn(f64) -> f64>(f: F, phi_lo: f64, tol: f64) -> Result<f64> {
    quad::integrate(f, phi_lo, FRAC_PI_2, tol).map(|r| r.value)
}

/// `∫₀^{ct} 4πr² ac_density(r) dr` to absolute accuracy `tol`.
pub fn integrate_ac_density(t: f64, p: &FlightParams, tol: f64) -> Result<f64> {
    check_time(t)?;
    check_tol(tol)?;
    let decay = libm::exp(-p.lambda() * t);
    integrate_phi(|phi| decay * weighted_components(phi, t, p).sum(), 0.0, tol)
}

/// Each density term integrated over the ball separately, each to `tol`.
pub fn integrate_ac_components(t: f64, p: &FlightParams, tol: f64) -> Result<ComponentIntegrals> {
    check_time(t)?;
    check_tol(tol)?;
    Ok(ComponentIntegrals {
        single: integrate_phi(|phi| weighted_components(phi, t, p).single, 0.0, tol)?,
        double: integrate_phi(|phi| weighted_components(phi, t, p).double, 0.0, tol)?,
        triple: integrate_phi(|phi| weighted_components(phi, t, p).triple, 0.0, tol)?,
    })
}

/// `∫₀^{r} 4πρ² ac_density(ρ) dρ` for `0 ≤ r < ct`.
pub fn integrate_ac_density_ball(r: f64, t: f64, p: &FlightParams, tol: f64) -> Result<f64> {
    check_time(t)?;
    check_tol(tol)?;
    let radius = p.radius(t);
    if !(r >= 0.0) || r >= radius {
        return Err(Error::RadiusOutsideBall { r, radius });
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let decay = libm::exp(-p.lambda() * t);
    let phi_lo = libm::acos(r / radius);
    integrate_phi(|phi| decay * weighted_components(phi, t, p).sum(), phi_lo, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{ac_density, g_tilde};

    #[test]
    fn total_mass_matches_g_tilde() {
        let p = FlightParams::new(5.0, 2.0).unwrap();
        let v = integrate_ac_density(0.1, &p, 1e-10).unwrap();
        assert!((v - g_tilde(0.1, &p).unwrap()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn termwise_masses() {
        let p = FlightParams::new(3.0, 2.5).unwrap();
        let t = 0.5;
        let lt = 1.25;
        let parts = integrate_ac_components(t, &p, 1e-12).unwrap();
        assert!((parts.single - lt).abs() < 1e-10);
        assert!((parts.double - lt * lt / 2.0).abs() < 1e-10);
        assert!((parts.triple - lt * lt * lt / 6.0).abs() < 1e-10);
    }

    #[test]
    fn small_ball_scales_like_volume() {
        let p = FlightParams::new(5.0, 2.0).unwrap();
        let r = 1e-3;
        let v = integrate_ac_density_ball(r, 0.1, &p, 1e-18).unwrap();
        let want = 4.0 / 3.0 * PI * r * r * r * ac_density(0.0, 0.1, &p).unwrap();
        assert!((v / want - 1.0).abs() < 1e-5);
        assert_eq!(integrate_ac_density_ball(0.0, 0.1, &p, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = FlightParams::new(5.0, 2.0).unwrap();
        assert!(integrate_ac_density(0.1, &p, 0.0).is_err());
        assert!(integrate_ac_density_ball(0.5, 0.1, &p, 1e-9).is_err());
        assert!(integrate_ac_density_ball(-0.1, 0.1, &p, 1e-9).is_err());
    }
}
