//! Generative modelling of graph spectra through Dyson Brownian motion.
//!
//! The entry-wise Ornstein-Uhlenbeck diffusion on a symmetric matrix induces
//! an autonomous SDE on its ordered eigenvalues: independent Brownian motions
//! in a confining potential with pairwise 1/gap repulsion. This crate
//! simulates that spectral diffusion forward in time with an adaptive
//! non-crossing step controller, trains a small score network on pathwise
//! increments over a fixed exponential time grid, and samples new spectra by
//! integrating the time-reversed SDE with an equilibrium shooting fallback.
//!
//! Supporting modules cover graph datasets (Weisfeiler-Leman refinement,
//! bimodal corpora of regular graphs, ego-graph extraction), symmetric
//! eigendecomposition with spectral rescaling, evaluation metrics
//! (mean distance, averaged marginal Wasserstein, epsilon-ball
//! classification), and self-check suites used by the `verify` CLI command
//! and the acceptance test target.

pub mod config;
pub mod error;
pub mod eval;
pub mod graphs;
pub mod linalg;
pub mod parallel;
pub mod rng;
pub mod sample;
pub mod score;
pub mod sde;
pub mod stats;
pub mod train;
pub mod verify;

pub use error::{Error, Result};
