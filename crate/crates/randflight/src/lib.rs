//! Host-side companion to `randflight-core`: a rayon chunk runner, the
//! goodness-of-fit statistics used by the validation suite, the suite
//! itself and the command-line front end.

pub mod cli;
pub mod parallel;
pub mod stats;
pub mod suite;

pub use parallel::RayonRunner;
pub use suite::{run_suite, CheckReport, SuiteOptions};
