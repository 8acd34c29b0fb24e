//! Robust simultaneous inference for high-dimensional means under heavy
//! tails.
//!
//! The pipeline: estimate each coordinate's mean and variance by
//! median-of-means on a hold-out block, form a truncated, partially
//! standardized max statistic over the main sample, approximate its
//! distribution with a Gaussian multiplier bootstrap, and invert the
//! statistic into simultaneous confidence intervals or zero-exclusion
//! tests. A functional layer projects curves onto a cosine basis so the
//! same machinery tests drift in diffusion models and mean constancy of
//! intraday return spreads.
//!
//! Entry points:
//! - [`stats::fit_estimates`] / [`stats::max_min_statistic`] — estimation
//!   and the test statistic.
//! - [`bootstrap::run_bootstrap`] — the multiplier bootstrap distribution.
//! - [`inference::simultaneous_cis`] / [`inference::zero_exclusion_test`]
//!   — intervals and tests.
//! - [`functional::functional_zero_test`] — curve-level tests via basis
//!   coefficients.
//! - [`harness`] — configuration, experiment drivers, and reports.

pub mod bootstrap;
pub mod data;
pub mod datagen;
pub mod error;
pub mod functional;
pub mod harness;
pub mod inference;
pub mod linalg;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
