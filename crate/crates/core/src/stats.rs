//! Robust coordinate statistics: truncation, median-of-means estimation on
//! the hold-out sample, and the max/min statistic over coordinates.
//!
//! For each coordinate `j` the main-sample statistic is
//!
//! ```text
//! g_j(x) = sum_i phi_{t_j}(X_ij - x) / (sigma_j^tau * sqrt(n))
//! ```
//!
//! where `phi_t` clamps to `[-t, t]`, `t_j = sqrt(n) * sigma_j`, and
//! `sigma_j` comes from a median-of-means variance estimate on the hold-out
//! rows. The exponent `tau` in `[0, 1]` interpolates between no
//! standardization (`tau = 0`) and full studentization (`tau = 1`). The max
//! statistic is `max_j g_j(mu_j)` and the min statistic is `min_j g_j(mu_j)`.

use crate::data::{BlockScheme, DataMatrix};
use crate::error::{Error, Result};

/// Truncation `phi_t(x) = sgn(x) * min(|x|, t)`, i.e. a clamp to `[-t, t]`.
///
/// Requires `t >= 0`.
#[inline]
pub fn truncate(x: f64, t: f64) -> f64 {
    assert!(t >= 0.0, "truncation level must be non-negative, got {t}");
    x.clamp(-t, t)
}

/// Median of a non-empty slice; for an even count, the midpoint of the two
/// middle order statistics.
pub(crate) fn median(values: &mut [f64]) -> f64 {
    debug_assert!(!values.is_empty());
    values.sort_unstable_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Per-block means of a hold-out column under the given block scheme.
pub fn block_means(column: &[f64], scheme: &BlockScheme) -> Result<Vec<f64>> {
    if column.len() != scheme.m_n() {
        return Err(Error::DimensionMismatch {
            context: "block_means",
            expected: scheme.m_n(),
            actual: column.len(),
        });
    }
    let ell = scheme.ell_n();
    Ok(column
        .chunks_exact(ell)
        .map(|block| block.iter().sum::<f64>() / ell as f64)
        .collect())
}

/// Median-of-means location estimate: median of the per-block means.
pub fn mom_mean(column: &[f64], scheme: &BlockScheme) -> Result<f64> {
    let mut means = block_means(column, scheme)?;
    Ok(median(&mut means))
}

/// Median-of-means variance estimate.
///
/// Within each block of length `ell`, entries `i` and `i + ell/2` are
/// paired and the block estimate is the average of `(x_i - x_{i'})^2 / 2`
/// over the `ell/2` pairs; the estimate is the median over blocks.
pub fn mom_variance(column: &[f64], scheme: &BlockScheme) -> Result<f64> {
    if column.len() != scheme.m_n() {
        return Err(Error::DimensionMismatch {
            context: "mom_variance",
            expected: scheme.m_n(),
            actual: column.len(),
        });
    }
    let ell = scheme.ell_n();
    let half = ell / 2;
    let mut estimates: Vec<f64> = column
        .chunks_exact(ell)
        .map(|block| {
            let sum: f64 = (0..half)
                .map(|i| {
                    let d = block[i] - block[i + half];
                    0.5 * d * d
                })
                .sum();
            sum / half as f64
        })
        .collect();
    Ok(median(&mut estimates))
}

/// Hold-out estimates feeding the statistic: centers, scales, truncation
/// levels, and the combined standardization weights `1/(sigma^tau sqrt(n))`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomEstimates {
    means: Vec<f64>,
    variances: Vec<f64>,
    trunc_levels: Vec<f64>,
    weights: Vec<f64>,
    tau: f64,
    n: usize,
}

impl MomEstimates {
    /// Assembles estimates from per-coordinate centers and variances, for a
    /// main sample of size `n`.
    ///
    /// Derived quantities: `t_j = sqrt(n) * sigma_j` and
    /// `w_j = 1 / (sigma_j^tau * sqrt(n))`. A variance of exactly zero is a
    /// [`Error::DegenerateVariance`]; both levels and weights would be
    /// meaningless.
    pub fn from_parts(means: Vec<f64>, variances: Vec<f64>, tau: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::invalid(
                "tau",
                format!("must lie in [0, 1], got {tau}"),
            ));
        }
        if n < 2 {
            return Err(Error::invalid("n", "main sample size must be at least 2"));
        }
        if variances.len() != means.len() {
            return Err(Error::DimensionMismatch {
                context: "MomEstimates::from_parts",
                expected: means.len(),
                actual: variances.len(),
            });
        }
        let sqrt_n = (n as f64).sqrt();
        let mut trunc_levels = Vec::with_capacity(variances.len());
        let mut weights = Vec::with_capacity(variances.len());
        for (j, &var) in variances.iter().enumerate() {
            if var == 0.0 {
                return Err(Error::DegenerateVariance { coord: j });
            }
            if !(var.is_finite() && var > 0.0) {
                return Err(Error::invalid(
                    "variances",
                    format!("coordinate {j} has invalid variance {var}"),
                ));
            }
            let sigma = var.sqrt();
            trunc_levels.push(sqrt_n * sigma);
            weights.push(sigma.powf(-tau) / sqrt_n);
        }
        Ok(MomEstimates {
            means,
            variances,
            trunc_levels,
            weights,
            tau,
            n,
        })
    }

    pub fn p(&self) -> usize {
        self.means.len()
    }

    /// Main-sample size the weights were computed for.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Median-of-means centers, one per coordinate.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Median-of-means variances, one per coordinate.
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn sigma_hat(&self, j: usize) -> f64 {
        self.variances[j].sqrt()
    }

    /// Truncation levels `t_j = sqrt(n) * sigma_j`.
    pub fn trunc_levels(&self) -> &[f64] {
        &self.trunc_levels
    }

    /// Standardization weights `w_j = 1 / (sigma_j^tau * sqrt(n))`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Runs median-of-means estimation on every hold-out column.
pub fn fit_estimates(data: &DataMatrix, scheme: &BlockScheme, tau: f64) -> Result<MomEstimates> {
    if scheme.m_n() != data.m_n() {
        return Err(Error::DimensionMismatch {
            context: "fit_estimates",
            expected: data.m_n(),
            actual: scheme.m_n(),
        });
    }
    let p = data.p();
    let mut means = Vec::with_capacity(p);
    let mut variances = Vec::with_capacity(p);
    for j in 0..p {
        let column = data.holdout_column(j);
        means.push(mom_mean(&column, scheme)?);
        let var = mom_variance(&column, scheme)?;
        if var == 0.0 {
            return Err(Error::DegenerateVariance { coord: j });
        }
        variances.push(var);
    }
    MomEstimates::from_parts(means, variances, tau, data.n())
}

/// The coordinate statistic `g_j(x)` evaluated from an explicit main-sample
/// column and estimate components.
pub fn coordinate_stat(
    main_column: &[f64],
    center: f64,
    trunc_level: f64,
    sigma_hat: f64,
    tau: f64,
) -> Result<f64> {
    if !(sigma_hat.is_finite() && sigma_hat > 0.0) {
        return Err(Error::invalid(
            "sigma_hat",
            format!("scale must be positive and finite, got {sigma_hat}"),
        ));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::invalid(
            "tau",
            format!("must lie in [0, 1], got {tau}"),
        ));
    }
    if main_column.is_empty() {
        return Err(Error::invalid("main_column", "must be non-empty"));
    }
    let n = main_column.len() as f64;
    let sum: f64 = main_column
        .iter()
        .map(|&x| truncate(x - center, trunc_level))
        .sum();
    Ok(sum / (sigma_hat.powf(tau) * n.sqrt()))
}

/// Max and min of `g_j(mu_j)` over all coordinates.
pub fn max_min_statistic(data: &DataMatrix, mu: &[f64], est: &MomEstimates) -> Result<(f64, f64)> {
    if mu.len() != data.p() {
        return Err(Error::DimensionMismatch {
            context: "max_min_statistic",
            expected: data.p(),
            actual: mu.len(),
        });
    }
    if est.p() != data.p() {
        return Err(Error::DimensionMismatch {
            context: "max_min_statistic",
            expected: data.p(),
            actual: est.p(),
        });
    }
    if est.n() != data.n() {
        return Err(Error::DimensionMismatch {
            context: "max_min_statistic",
            expected: data.n(),
            actual: est.n(),
        });
    }
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for (j, &mu_j) in mu.iter().enumerate() {
        let t = est.trunc_levels()[j];
        let w = est.weights()[j];
        let sum: f64 = data.main_column(j).map(|x| truncate(x - mu_j, t)).sum();
        let g = sum * w;
        max = max.max(g);
        min = min.min(g);
    }
    Ok((max, min))
}
