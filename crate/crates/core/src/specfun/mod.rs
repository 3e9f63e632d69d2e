//! Special functions needed by the characteristic-function and density
//! formulas.
//!
//! Everything here is real-valued. The cosine integral is the entire one,
//! [`ci_paper`]`(x) = ∫₀ˣ (cos ξ − 1)/ξ dξ`, which is the negative of the
//! standard `Cin` and *not* the classical `Ci` with a logarithmic
//! singularity at the origin.

mod bessel;
mod gamma;
mod hyper;
mod sici;

pub use bessel::{bessel_j, Order};
pub use gamma::{gamma, log_gamma, pochhammer};
pub use hyper::{hyp3f2_unit_terminating, hyp5f4_unit};
pub use sici::{ci_paper, si};

pub(crate) use bessel::bessel_j_unchecked;
pub(crate) use gamma::{ln_gamma, ln_gamma_signed};
