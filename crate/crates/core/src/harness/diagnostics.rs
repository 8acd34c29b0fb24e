//! Diagnostics: the variance-decay profile that motivates partial
//! standardization, and a Kolmogorov-distance probe comparing the Monte
//! Carlo distribution of the max statistic with its bootstrap counterpart.

use rayon::prelude::*;

use crate::bootstrap::run_bootstrap;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::{fit_estimates, max_min_statistic, MomEstimates};

use super::config::ExperimentConfig;
use super::coverage::{model_from_config, sample_dataset};
use crate::data::BlockScheme;

/// Sorts the estimated scales in decreasing order and fits the log-log
/// decay exponent: the least-squares slope of `-ln sigma_(j)` on `ln j`.
///
/// Returns `(sorted scales, beta_hat)`. Needs at least two coordinates.
pub fn variance_decay_diagnostic(est: &MomEstimates) -> Result<(Vec<f64>, f64)> {
    let p = est.p();
    if p < 2 {
        return Err(Error::invalid(
            "est",
            "need at least two coordinates to fit a decay exponent",
        ));
    }
    let mut sigmas: Vec<f64> = est.variances().iter().map(|v| v.sqrt()).collect();
    sigmas.sort_unstable_by(|a, b| b.total_cmp(a));

    let xs: Vec<f64> = (1..=p).map(|j| (j as f64).ln()).collect();
    let ys: Vec<f64> = sigmas.iter().map(|s| -s.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / p as f64;
    let y_mean = ys.iter().sum::<f64>() / p as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - x_mean) * (y - y_mean);
        sxx += (x - x_mean) * (x - x_mean);
    }
    Ok((sigmas, sxy / sxx))
}

/// Two-sample Kolmogorov distance: the largest gap between the empirical
/// distribution functions, evaluated by a sorted merge walk.
pub fn kolmogorov_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("samples", "both samples must be non-empty"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < n || j < m {
        // Advance past every copy of the next smallest value in both
        // samples before comparing the step heights.
        let x = match (a.get(i), b.get(j)) {
            (Some(&av), Some(&bv)) => av.min(bv),
            (Some(&av), None) => av,
            (None, Some(&bv)) => bv,
            (None, None) => break,
        };
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        let gap = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        sup = sup.max(gap);
    }
    Ok(sup)
}

/// Samples one dataset from the configured model and reports its decay
/// profile: `(sorted scales, fitted exponent)`.
pub fn variance_decay_probe(config: &ExperimentConfig, seed: u64) -> Result<(Vec<f64>, f64)> {
    config.validate()?;
    let model = model_from_config(config)?;
    let scheme = BlockScheme::new(config.ell_n, config.m_n)?;
    let data = sample_dataset(config, &model, &RngStream::new(seed))?;
    let est = fit_estimates(&data, &scheme, config.tau)?;
    variance_decay_diagnostic(&est)
}

/// Result of the bootstrap-fidelity probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsProbe {
    /// Kolmogorov distance between the two max-statistic samples.
    pub distance: f64,
    /// Draws on each side.
    pub draws: usize,
}

/// Monte Carlo draws of the max statistic at the true (zero) means, one
/// fresh dataset per draw.
pub fn max_statistic_draws(config: &ExperimentConfig, draws: usize, seed: u64) -> Result<Vec<f64>> {
    if draws == 0 {
        return Err(Error::invalid("draws", "need at least one draw"));
    }
    config.validate()?;
    let model = model_from_config(config)?;
    let scheme = BlockScheme::new(config.ell_n, config.m_n)?;
    let master = RngStream::new(seed);
    let truth = vec![0.0; config.p];
    (0..draws)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let data = sample_dataset(config, &model, &master.child(t as u64))?;
            let est = fit_estimates(&data, &scheme, config.tau)?;
            let (max, _) = max_min_statistic(&data, &truth, &est)?;
            Ok(max)
        })
        .collect()
}

/// Compares `draws` Monte Carlo max statistics against `draws` bootstrap
/// draws taken from a single dataset.
pub fn ks_probe(config: &ExperimentConfig, draws: usize, seed: u64) -> Result<KsProbe> {
    let master = RngStream::new(seed);
    let mc = max_statistic_draws(config, draws, master.child(0).seed())?;

    let model = model_from_config(config)?;
    let scheme = BlockScheme::new(config.ell_n, config.m_n)?;
    let data = sample_dataset(config, &model, &master.child(1))?;
    let est = fit_estimates(&data, &scheme, config.tau)?;
    let boot = run_bootstrap(&data, &est, draws, master.child(2).seed())?;

    Ok(KsProbe {
        distance: kolmogorov_distance(&mc, boot.sorted_max())?,
        draws,
    })
}
