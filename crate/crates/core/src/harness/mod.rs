//! Experiment drivers and artifact plumbing: configuration files, the
//! coverage and power studies, pairs-trading screening, diagnostics, and
//! report emission.

pub mod config;
pub mod coverage;
pub mod diagnostics;
pub mod pairs;
pub mod power;
pub mod report;
