//! Kernels for the symmetric Markov random flight in three dimensions.
//!
//! A particle leaves the origin at constant speed `c` in a uniformly random
//! direction and redraws its direction uniformly at the events of a Poisson
//! process of rate `λ`. This crate evaluates the objects attached to that
//! process on small time intervals:
//!
//! * [`specfun`]: log-gamma, Pochhammer symbols, Bessel `J` of integer and
//!   half-integer order, the sine integral and the entire cosine integral,
//!   terminating hypergeometric sums at unit argument;
//! * [`arctan`]: series for `arctan(z)^n`, `n = 1..4`, and their coefficients;
//! * [`charfun`]: conditional characteristic functions `H₀..H₃` and the
//!   small-time asymptotic characteristic function;
//! * [`density`]: the small-time transition density, subball probabilities
//!   and the total-mass accuracy functions;
//! * [`montecarlo`]: exact simulation with reproducible per-chunk substreams;
//! * [`validate`]: adaptive Gauss–Kronrod quadrature of the density.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arctan;
pub mod charfun;
pub mod density;
mod error;
pub mod model;
pub mod montecarlo;
pub mod quad;
pub(crate) mod series;
pub mod specfun;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    validate_params, DensityValue, FlightParams, McConfig, McEstimate, SeriesTruncation, Vec3,
};
