//! Monte Carlo coverage study for the simultaneous confidence intervals.
//!
//! Each trial draws a fresh mean-zero heavy-tailed dataset, builds the
//! bootstrap band at every requested level, and records whether all `p`
//! intervals simultaneously cover the true means (all zero here) and how
//! wide the median interval is. Trials run in parallel on child streams
//! indexed by trial number, so reports are identical for any thread count.

use rayon::prelude::*;

use crate::bootstrap::run_bootstrap;
use crate::data::{BlockScheme, DataMatrix};
use crate::datagen::{
    sample_elliptical_t6, sample_separable_pareto6, CorrelationKind, CorrelationSpec,
    CovarianceModel,
};
use crate::error::{Error, Result};
use crate::inference::simultaneous_cis;
use crate::rng::RngStream;
use crate::stats::{fit_estimates, median};

use super::config::{Correlation, Distribution, ExperimentConfig};

/// Aggregated results for one confidence level.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub alpha: f64,
    pub trials: usize,
    /// Trials where every interval was bounded and contained the truth.
    pub covered: usize,
    pub coverage: f64,
    /// Mean over clean trials of the per-trial median interval width.
    pub mean_median_width: f64,
    /// Trials with an unbounded or empty interval: counted as non-covering
    /// and excluded from the width average.
    pub flagged: usize,
    /// Trials lost to a degenerate hold-out variance: also non-covering.
    pub degenerate: usize,
}

/// Full coverage report: one row per level, plus the settings that made it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
    pub config: ExperimentConfig,
}

/// Per-trial outcome at one level.
enum TrialResult {
    Degenerate,
    Bands(Vec<AlphaOutcome>),
}

struct AlphaOutcome {
    covered: bool,
    flagged: bool,
    median_width: Option<f64>,
}

/// Builds the covariance model a config describes.
pub(crate) fn model_from_config(config: &ExperimentConfig) -> Result<CovarianceModel> {
    let kind = match config.correlation {
        Correlation::Autoregressive => CorrelationKind::Autoregressive(config.ar_coefficient),
        Correlation::AlgebraicDecay => CorrelationKind::AlgebraicDecay,
        Correlation::Identity => CorrelationKind::Identity,
    };
    CovarianceModel::variance_decay(CorrelationSpec { kind, p: config.p })
}

/// Draws one dataset of `config.n_total` rows for the configured
/// distribution, using per-row children of `stream`.
pub(crate) fn sample_dataset(
    config: &ExperimentConfig,
    model: &CovarianceModel,
    stream: &RngStream,
) -> Result<DataMatrix> {
    let rows = match config.distribution {
        Distribution::EllipticalT6 => sample_elliptical_t6(stream, config.n_total, model),
        Distribution::SeparablePareto6 => sample_separable_pareto6(stream, config.n_total, model),
    };
    DataMatrix::new(rows, config.n_total - config.m_n, config.m_n, config.p)
}

/// Runs the full coverage experiment described by `config`.
pub fn run_coverage_experiment(config: &ExperimentConfig) -> Result<CoverageReport> {
    config.validate()?;
    let model = model_from_config(config)?;
    let scheme = BlockScheme::new(config.ell_n, config.m_n)?;
    let master = RngStream::new(config.seed);
    let truth = vec![0.0; config.p];

    let results: Vec<TrialResult> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialResult> {
            let trial_stream = master.child(trial as u64);
            let data = sample_dataset(config, &model, &trial_stream.child(0))?;
            let est = match fit_estimates(&data, &scheme, config.tau) {
                Ok(est) => est,
                Err(Error::DegenerateVariance { .. }) => return Ok(TrialResult::Degenerate),
                Err(e) => return Err(e),
            };
            let boot_seed = trial_stream.child(1).seed();
            let boot = run_bootstrap(&data, &est, config.bootstrap_samples, boot_seed)?;
            let mut outcomes = Vec::with_capacity(config.alphas.len());
            for &alpha in &config.alphas {
                let band = simultaneous_cis(&data, &est, &boot, alpha)?;
                let flagged = band.intervals.iter().any(|iv| !iv.is_bounded());
                let covered = !flagged && band.covers(&truth);
                let median_width = if flagged {
                    None
                } else {
                    let mut widths: Vec<f64> = band
                        .intervals
                        .iter()
                        .map(|iv| iv.width().expect("bounded interval has a width"))
                        .collect();
                    Some(median(&mut widths))
                };
                outcomes.push(AlphaOutcome {
                    covered,
                    flagged,
                    median_width,
                });
            }
            Ok(TrialResult::Bands(outcomes))
        })
        .collect::<Result<_>>()?;

    let rows = config
        .alphas
        .iter()
        .enumerate()
        .map(|(a_idx, &alpha)| {
            let mut covered = 0usize;
            let mut flagged = 0usize;
            let mut degenerate = 0usize;
            let mut width_sum = 0.0;
            let mut width_count = 0usize;
            for result in &results {
                match result {
                    TrialResult::Degenerate => degenerate += 1,
                    TrialResult::Bands(outcomes) => {
                        let o = &outcomes[a_idx];
                        if o.covered {
                            covered += 1;
                        }
                        if o.flagged {
                            flagged += 1;
                        }
                        if let Some(w) = o.median_width {
                            width_sum += w;
                            width_count += 1;
                        }
                    }
                }
            }
            CoverageRow {
                alpha,
                trials: config.trials,
                covered,
                coverage: covered as f64 / config.trials as f64,
                mean_median_width: if width_count > 0 {
                    width_sum / width_count as f64
                } else {
                    0.0
                },
                flagged,
                degenerate,
            }
        })
        .collect();

    Ok(CoverageReport {
        rows,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            n_total: 60,
            m_n: 20,
            ell_n: 4,
            p: 5,
            trials: 8,
            bootstrap_samples: 40,
            alphas: vec![0.1],
            seed: 3,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn coverage_runs_are_deterministic() {
        let config = small_config();
        let one = run_coverage_experiment(&config).unwrap();
        let two = run_coverage_experiment(&config).unwrap();
        assert_eq!(one, two);
        let row = &one.rows[0];
        assert_eq!(row.trials, 8);
        assert!(row.coverage >= 0.0 && row.coverage <= 1.0);
        assert!(row.mean_median_width > 0.0);
    }

    #[test]
    fn separable_distribution_also_runs() {
        let mut config = small_config();
        config.distribution = Distribution::SeparablePareto6;
        config.correlation = Correlation::AlgebraicDecay;
        let report = run_coverage_experiment(&config).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(
            report.rows[0].covered
                + report.rows[0].degenerate
                + (config.trials - report.rows[0].covered - report.rows[0].degenerate),
            config.trials
        );
    }
}
