//! Degree-balanced randomized designs for A/B tests on social networks.
//!
//! The pipeline: represent the user graph ([`graph`]), draw
//! degree-pairing randomized allocations and rerandomize them against
//! graph-cut stopping rules ([`design`]), derive those rules from the
//! asymptotic distribution of the cut statistics ([`asymptotics`]),
//! score designs against the variance objectives of the two response
//! models ([`variance`]), and benchmark everything against Monte Carlo
//! baselines ([`evaluation`]). The [`cli`] module exposes the whole
//! pipeline as the `netab` binary.

pub mod asymptotics;
pub mod cli;
pub mod design;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod seeds;
pub mod stats;
pub mod variance;

pub use error::{Error, Result};
