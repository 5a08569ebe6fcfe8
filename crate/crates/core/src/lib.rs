//! Solution-structure phase transition of random k-SAT.
//!
//! The crate is split the same way the computation is:
//!
//! * [`analytic`] holds the exact and asymptotic first-moment formulas for
//!   pairs of satisfying assignments (all in log space).
//! * [`critical`] studies the critical-point curve `r(s)`, its extrema and
//!   inflection, and locates the threshold `r_cr` where the major similarity
//!   degree jumps.
//! * [`lab`] generates random k-SAT formulas, enumerates their solutions and
//!   builds the empirical pair-similarity histograms used to check the
//!   analytic side by brute force.
//! * [`cli`] is the command-line surface (`ksat-smj` binary).

pub mod analytic;
pub mod cli;
pub mod critical;
mod error;
pub mod lab;
pub mod roots;

pub use error::{Error, Result};
