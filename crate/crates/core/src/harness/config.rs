//! TOML experiment configuration.
//!
//! Every field has a default matching the headline simulation settings
//! (elliptical t(6) data, AR(0.5) correlation, `n_total = 500` with a
//! 50-row hold-out, `p = 100`, `tau = 0.9`, 500 trials of 500 bootstrap
//! draws), so an empty document is a complete, valid configuration.
//! Validation reports the offending field by name.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::BlockScheme;
use crate::error::{Error, Result};

/// Which heavy-tailed sampler generates the synthetic rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    EllipticalT6,
    SeparablePareto6,
}

/// Which correlation structure the covariance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correlation {
    Autoregressive,
    AlgebraicDecay,
    Identity,
}

/// Settings for the coverage study plus the functional and pairs variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub distribution: Distribution,
    pub correlation: Correlation,
    /// Coefficient of the autoregressive correlation, in (0, 1).
    pub ar_coefficient: f64,
    /// Total rows per dataset (main + hold-out).
    pub n_total: usize,
    /// Hold-out rows (even).
    pub m_n: usize,
    /// Median-of-means block length (even, divides `m_n`).
    pub ell_n: usize,
    /// Dimension.
    pub p: usize,
    /// Partial-standardization exponent in [0, 1].
    pub tau: f64,
    /// Levels at which intervals are built.
    pub alphas: Vec<f64>,
    /// Monte Carlo trials.
    pub trials: usize,
    /// Bootstrap draws per trial.
    pub bootstrap_samples: usize,
    /// Master seed; all streams derive from it.
    pub seed: u64,
    pub gbm: GbmConfig,
    pub pairs: PairsConfig,
}

/// Settings for the functional drift test on simulated GBM paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GbmConfig {
    /// Curves per trial (main + hold-out).
    pub n_total: usize,
    pub m_n: usize,
    pub ell_n: usize,
    /// Number of projected cosine coefficients.
    pub p: usize,
    /// Path discretization steps.
    pub k_steps: usize,
    /// Volatility of the simulated paths.
    pub varsigma0: f64,
    /// Constant drift level; the tested signal is `h * mu_level`.
    pub mu_level: f64,
    /// Drift scales swept by the power curve (`h = 0` is the null).
    pub h_grid: Vec<f64>,
    pub alpha: f64,
    pub trials: usize,
    pub bootstrap_samples: usize,
    pub tau: f64,
    /// First basis index to project on; 1 keeps the constant element.
    pub start_index: usize,
}

/// Settings for the pairs-trading screen on return-difference curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairsConfig {
    /// Number of projected cosine coefficients.
    pub p: usize,
    pub ell_n: usize,
    pub tau: f64,
    pub alpha: f64,
    pub bootstrap_samples: usize,
    /// First basis index; 2 skips the constant element, so the null is
    /// "the mean curve is constant" rather than "zero".
    pub start_index: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            distribution: Distribution::EllipticalT6,
            correlation: Correlation::Autoregressive,
            ar_coefficient: 0.5,
            n_total: 500,
            m_n: 50,
            ell_n: 10,
            p: 100,
            tau: 0.9,
            alphas: vec![0.05, 0.10],
            trials: 500,
            bootstrap_samples: 500,
            seed: 1,
            gbm: GbmConfig::default(),
            pairs: PairsConfig::default(),
        }
    }
}

impl Default for GbmConfig {
    fn default() -> Self {
        GbmConfig {
            n_total: 300,
            m_n: 30,
            ell_n: 10,
            p: 100,
            k_steps: 100,
            varsigma0: 0.2,
            mu_level: 1.0,
            h_grid: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
            alpha: 0.05,
            trials: 500,
            bootstrap_samples: 500,
            tau: 0.9,
            start_index: 1,
        }
    }
}

impl Default for PairsConfig {
    fn default() -> Self {
        PairsConfig {
            p: 50,
            ell_n: 10,
            tau: 0.9,
            alpha: 0.05,
            bootstrap_samples: 500,
            start_index: 2,
        }
    }
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn check_block(field_prefix: &str, ell_n: usize, m_n: usize) -> Result<()> {
    if m_n < 2 || !m_n.is_multiple_of(2) {
        return Err(config_err(
            &format!("{field_prefix}m_n"),
            format!("hold-out size must be even and at least 2, got {m_n}"),
        ));
    }
    if !ell_n.is_multiple_of(2) || ell_n < 2 {
        return Err(config_err(
            &format!("{field_prefix}ell_n"),
            "ell_n must be even",
        ));
    }
    BlockScheme::new(ell_n, m_n)
        .map_err(|e| config_err(&format!("{field_prefix}ell_n"), e.to_string()))?;
    Ok(())
}

fn check_tau(field: &str, tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(config_err(field, format!("must lie in [0, 1], got {tau}")));
    }
    Ok(())
}

fn check_alpha(field: &str, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(config_err(
            field,
            format!("must lie in (0, 1), got {alpha}"),
        ));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Checks every field; errors name the field that failed.
    pub fn validate(&self) -> Result<()> {
        if self.correlation == Correlation::Autoregressive
            && !(self.ar_coefficient > 0.0 && self.ar_coefficient < 1.0)
        {
            return Err(config_err(
                "ar_coefficient",
                format!("must lie in (0, 1), got {}", self.ar_coefficient),
            ));
        }
        check_block("", self.ell_n, self.m_n)?;
        if self.n_total < self.m_n + 2 {
            return Err(config_err(
                "n_total",
                format!(
                    "need at least {} rows for a {}-row hold-out",
                    self.m_n + 2,
                    self.m_n
                ),
            ));
        }
        if self.p == 0 {
            return Err(config_err("p", "dimension must be at least 1"));
        }
        check_tau("tau", self.tau)?;
        if self.alphas.is_empty() {
            return Err(config_err("alphas", "need at least one level"));
        }
        for &a in &self.alphas {
            check_alpha("alphas", a)?;
        }
        if self.trials == 0 {
            return Err(config_err("trials", "need at least one trial"));
        }
        if self.bootstrap_samples == 0 {
            return Err(config_err("bootstrap_samples", "need at least one draw"));
        }
        self.gbm.validate()?;
        self.pairs.validate()?;
        Ok(())
    }

    /// Serializes to TOML; the output re-loads to an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

impl GbmConfig {
    pub fn validate(&self) -> Result<()> {
        check_block("gbm.", self.ell_n, self.m_n)?;
        if self.n_total < self.m_n + 2 {
            return Err(config_err(
                "gbm.n_total",
                format!("need at least {} curves", self.m_n + 2),
            ));
        }
        if self.p == 0 {
            return Err(config_err("gbm.p", "need at least one coefficient"));
        }
        if self.k_steps == 0 {
            return Err(config_err("gbm.k_steps", "need at least one step"));
        }
        if !(self.varsigma0.is_finite() && self.varsigma0 >= 0.0) {
            return Err(config_err(
                "gbm.varsigma0",
                format!("must be non-negative, got {}", self.varsigma0),
            ));
        }
        if !self.mu_level.is_finite() {
            return Err(config_err("gbm.mu_level", "must be finite"));
        }
        if self.h_grid.is_empty() {
            return Err(config_err("gbm.h_grid", "need at least one drift scale"));
        }
        if let Some(bad) = self.h_grid.iter().find(|h| !(h.is_finite() && **h >= 0.0)) {
            return Err(config_err(
                "gbm.h_grid",
                format!("drift scales must be non-negative, got {bad}"),
            ));
        }
        check_alpha("gbm.alpha", self.alpha)?;
        check_tau("gbm.tau", self.tau)?;
        if self.trials == 0 {
            return Err(config_err("gbm.trials", "need at least one trial"));
        }
        if self.bootstrap_samples == 0 {
            return Err(config_err(
                "gbm.bootstrap_samples",
                "need at least one draw",
            ));
        }
        if self.start_index == 0 {
            return Err(config_err("gbm.start_index", "basis indices are 1-based"));
        }
        Ok(())
    }
}

impl PairsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(config_err("pairs.p", "need at least one coefficient"));
        }
        if !self.ell_n.is_multiple_of(2) || self.ell_n < 2 {
            return Err(config_err("pairs.ell_n", "ell_n must be even"));
        }
        check_tau("pairs.tau", self.tau)?;
        check_alpha("pairs.alpha", self.alpha)?;
        if self.bootstrap_samples == 0 {
            return Err(config_err(
                "pairs.bootstrap_samples",
                "need at least one draw",
            ));
        }
        if self.start_index == 0 {
            return Err(config_err("pairs.start_index", "basis indices are 1-based"));
        }
        Ok(())
    }
}

/// Parses a TOML document into a validated config.
pub fn parse_config(document: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = toml::from_str(document).map_err(|e| Error::Config {
        field: "<document>".to_string(),
        reason: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

/// Loads and validates a TOML config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let document = std::fs::read_to_string(path)?;
    parse_config(&document)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default_config() {
        let config = parse_config("").unwrap();
        assert_eq!(config, ExperimentConfig::default());
        assert_eq!(config.tau, 0.9);
        assert_eq!(config.bootstrap_samples, 500);
        assert_eq!(config.n_total, 500);
        assert_eq!(config.m_n, 50);
        assert_eq!(config.alphas, vec![0.05, 0.10]);
    }

    #[test]
    fn partial_document_overrides_selected_fields() {
        let config = parse_config("p = 20\ntrials = 7\n[gbm]\nh_grid = [0.0, 0.25]\n").unwrap();
        assert_eq!(config.p, 20);
        assert_eq!(config.trials, 7);
        assert_eq!(config.gbm.h_grid, vec![0.0, 0.25]);
        // Untouched fields keep their defaults.
        assert_eq!(config.gbm.k_steps, 100);
        assert_eq!(config.tau, 0.9);
    }

    #[test]
    fn odd_block_length_names_the_field() {
        let err =
            parse_config("ell_n = 7\nm_n = 49\nn_total = 60\n").expect_err("odd m_n should fail");
        let msg = err.to_string();
        assert!(msg.contains("m_n"), "message was: {msg}");

        let err = parse_config("ell_n = 7\nm_n = 42\n").err().unwrap();
        let msg = err.to_string();
        assert!(msg.contains("ell_n"), "message was: {msg}");
        assert!(msg.contains("even"), "message was: {msg}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let err = parse_config("truncation = 3\n").err().unwrap();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn round_trip_preserves_config() {
        let config = ExperimentConfig {
            p: 250,
            distribution: Distribution::SeparablePareto6,
            correlation: Correlation::AlgebraicDecay,
            seed: 777,
            gbm: GbmConfig {
                h_grid: vec![0.0, 0.5],
                ..GbmConfig::default()
            },
            pairs: PairsConfig {
                p: 12,
                ..PairsConfig::default()
            },
            ..ExperimentConfig::default()
        };
        let reloaded = parse_config(&config.to_toml()).unwrap();
        assert_eq!(config, reloaded);
    }

    #[test]
    fn validation_covers_subsections() {
        let mut config = ExperimentConfig::default();
        config.gbm.varsigma0 = -1.0;
        let msg = config.validate().err().unwrap().to_string();
        assert!(msg.contains("gbm.varsigma0"), "message was: {msg}");

        let mut config = ExperimentConfig::default();
        config.pairs.start_index = 0;
        let msg = config.validate().err().unwrap().to_string();
        assert!(msg.contains("pairs.start_index"), "message was: {msg}");

        let config = ExperimentConfig {
            alphas: vec![0.05, 1.5],
            ..ExperimentConfig::default()
        };
        assert!(config.validate().is_err());
    }
}
