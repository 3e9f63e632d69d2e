//! Parameter and result types shared by every module.

use core::ops::{Add, Mul};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Speed `c` and switching intensity `λ` of the random flight.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "raw::FlightParams"))]
pub struct FlightParams {
    c: f64,
    lambda: f64,
}

/// Checks `c > 0`, `lambda > 0`, both finite.
pub fn validate_params(c: f64, lambda: f64) -> Result<FlightParams> {
    if !c.is_finite() {
        return Err(Error::NonFinite { field: "c" });
    }
    if !lambda.is_finite() {
        return Err(Error::NonFinite { field: "lambda" });
    }
    if c <= 0.0 {
        return Err(Error::NonPositiveSpeed(c));
    }
    if lambda <= 0.0 {
        return Err(Error::NonPositiveIntensity(lambda));
    }
    Ok(FlightParams { c, lambda })
}

impl FlightParams {
    pub fn new(c: f64, lambda: f64) -> Result<Self> {
        validate_params(c, lambda)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Radius `ct` of the ball that carries the law of `X(t)`.
    pub fn radius(&self, t: f64) -> f64 {
        self.c * t
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

/// Point (or direction) in three-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Vec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
    };

    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Vec3 { x1, x2, x3 }
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;

    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;

    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

/// Term budget and tail tolerance for every infinite series in the crate.
///
/// Summation stops at the first term whose magnitude falls below `tail_tol`,
/// or after `max_terms` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "raw::SeriesTruncation"))]
pub struct SeriesTruncation {
    max_terms: usize,
    tail_tol: f64,
}

impl SeriesTruncation {
    pub const DEFAULT_MAX_TERMS: usize = 200;
    pub const DEFAULT_TAIL_TOL: f64 = 1e-14;

    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidConfig("max_terms must be at least 1"));
        }
        if !(tail_tol >= 0.0) || !tail_tol.is_finite() {
            return Err(Error::InvalidConfig(
                "tail_tol must be finite and nonnegative",
            ));
        }
        Ok(SeriesTruncation {
            max_terms,
            tail_tol,
        })
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn with_max_terms(self, max_terms: usize) -> Result<Self> {
        SeriesTruncation::new(max_terms, self.tail_tol)
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation {
            max_terms: Self::DEFAULT_MAX_TERMS,
            tail_tol: Self::DEFAULT_TAIL_TOL,
        }
    }
}

/// Value of the transition density at a point.
///
/// The singular part is a uniform measure of total mass `atom_mass` on the
/// sphere of radius `atom_radius`; it has no pointwise value and is kept
/// apart from the absolutely continuous part `ac_value`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DensityValue {
    pub atom_radius: f64,
    pub atom_mass: f64,
    pub ac_value: f64,
}

/// Monte Carlo run configuration.
///
/// Results depend only on this value, the flight parameters and the query;
/// the worker count never changes them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "raw::McConfig"))]
pub struct McConfig {
    samples: u64,
    seed: u64,
    chunk: u64,
}

impl McConfig {
    pub const DEFAULT_CHUNK: u64 = 1 << 16;

    pub fn new(samples: u64, seed: u64, chunk: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1"));
        }
        if chunk == 0 {
            return Err(Error::InvalidConfig("chunk must be at least 1"));
        }
        Ok(McConfig {
            samples,
            seed,
            chunk,
        })
    }

    /// Default chunk size.
    pub fn with_seed(samples: u64, seed: u64) -> Result<Self> {
        McConfig::new(samples, seed, Self::DEFAULT_CHUNK)
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chunk(&self) -> u64 {
        self.chunk
    }

    pub fn n_chunks(&self) -> usize {
        self.samples.div_ceil(self.chunk) as usize
    }

    /// Number of samples in chunk `index`.
    pub fn chunk_len(&self, index: usize) -> u64 {
        let start = index as u64 * self.chunk;
        self.chunk.min(self.samples.saturating_sub(start))
    }
}

/// Sample mean with its standard error `sd / √samples`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// Whether `value` lies within `sigmas` standard errors plus `slack`.
    pub fn agrees_with(&self, value: f64, sigmas: f64, slack: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.std_error + slack
    }
}

/// Unchecked mirrors used only to run deserialized values through the
/// validating constructors.
#[cfg(feature = "serde")]
mod raw {
    use serde::Deserialize;

    #[derive(Deserialize)]
    pub struct FlightParams {
        c: f64,
        lambda: f64,
    }

    #[derive(Deserialize)]
    pub struct SeriesTruncation {
        max_terms: usize,
        tail_tol: f64,
    }

    #[derive(Deserialize)]
    pub struct McConfig {
        samples: u64,
        seed: u64,
        chunk: u64,
    }

    impl TryFrom<FlightParams> for super::FlightParams {
        type Error = crate::Error;

        fn try_from(raw: FlightParams) -> crate::Result<Self> {
            super::validate_params(raw.c, raw.lambda)
        }
    }

    impl TryFrom<SeriesTruncation> for super::SeriesTruncation {
        type Error = crate::Error;

        fn try_from(raw: SeriesTruncation) -> crate::Result<Self> {
            super::SeriesTruncation::new(raw.max_terms, raw.tail_tol)
        }
    }

    impl TryFrom<McConfig> for super::McConfig {
        type Error = crate::Error;

        fn try_from(raw: McConfig) -> crate::Result<Self> {
            super::McConfig::new(raw.samples, raw.seed, raw.chunk)
        }
    }
}
