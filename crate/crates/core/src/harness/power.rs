//! Rejection-rate sweep for the functional drift test on simulated GBM.
//!
//! For every drift scale `h` in the configured grid, `trials` batches of
//! paths are simulated, shifted by `-1` (so "no drift" means the shifted
//! mean curve is zero), projected on the cosine basis, and tested. The
//! entry at `h = 0` estimates the empirical level; later entries trace the
//! power curve.

use rayon::prelude::*;

use crate::data::BlockScheme;
use crate::error::Result;
use crate::functional::{functional_zero_test, sample_gbm, CurveSample, GbmSpec};
use crate::rng::RngStream;

use super::config::ExperimentConfig;

/// Rejection rate at one drift scale.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPoint {
    pub h: f64,
    pub trials: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
}

/// Runs the drift test across the configured `h` grid.
pub fn run_power_curve(config: &ExperimentConfig) -> Result<Vec<PowerPoint>> {
    config.validate()?;
    let g = &config.gbm;
    let scheme = BlockScheme::new(g.ell_n, g.m_n)?;
    let master = RngStream::new(config.seed);

    let mut points = Vec::with_capacity(g.h_grid.len());
    for (h_idx, &h) in g.h_grid.iter().enumerate() {
        let spec = GbmSpec::constant(h, g.mu_level, g.varsigma0, g.k_steps)?;
        let h_stream = master.child(h_idx as u64);
        let rejections: usize = (0..g.trials)
            .into_par_iter()
            .map(|trial| -> Result<usize> {
                let trial_stream = h_stream.child(trial as u64);
                let curves: Vec<CurveSample> = (0..g.n_total)
                    .map(|i| {
                        let mut path_stream = trial_stream.child(i as u64);
                        let path = sample_gbm(&mut path_stream, &spec);
                        let shifted: Vec<f64> = path.values().iter().map(|v| v - 1.0).collect();
                        CurveSample::new(path.grid().to_vec(), shifted).expect("GBM grid is valid")
                    })
                    .collect();
                let boot_seed = trial_stream.child(u64::MAX).seed();
                let outcome = functional_zero_test(
                    &curves,
                    g.start_index,
                    g.p,
                    &scheme,
                    g.tau,
                    g.alpha,
                    g.bootstrap_samples,
                    boot_seed,
                )?;
                Ok(outcome.reject as usize)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        points.push(PowerPoint {
            h,
            trials: g.trials,
            rejections,
            rejection_rate: rejections as f64 / g.trials as f64,
        });
    }
    Ok(points)
}
