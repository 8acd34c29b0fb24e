//! Gaussian multiplier bootstrap for the max/min statistic.
//!
//! Each draw multiplies the centered truncated summands by i.i.d. standard
//! normals and recomputes the max and min over coordinates:
//!
//! ```text
//! M*_max = max_j sum_i xi_i (Z_ij - Zbar_j) / (sigma_j^tau sqrt(n))
//! ```
//!
//! with `Z_ij = phi_{t_j}(X_ij - center_j)` computed once from the main
//! sample and the hold-out estimates. Draws are embarrassingly parallel;
//! each uses a child stream derived from `(seed, draw index)`, so the
//! resulting distribution is identical regardless of thread count.

use rayon::prelude::*;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::{truncate, MomEstimates};

/// Centered, weighted truncation table shared by all draws:
/// `v_ij = (Z_ij - Zbar_j) * w_j`, stored row-major.
struct CenteredTable {
    v: Vec<f64>,
    p: usize,
}

impl CenteredTable {
    fn build(data: &DataMatrix, est: &MomEstimates) -> Result<CenteredTable> {
        if est.p() != data.p() {
            return Err(Error::DimensionMismatch {
                context: "bootstrap centering",
                expected: data.p(),
                actual: est.p(),
            });
        }
        if est.n() != data.n() {
            return Err(Error::DimensionMismatch {
                context: "bootstrap centering",
                expected: data.n(),
                actual: est.n(),
            });
        }
        let (n, p) = (data.n(), data.p());
        let mut v = vec![0.0; n * p];
        for j in 0..p {
            let t = est.trunc_levels()[j];
            let center = est.means()[j];
            let mut sum = 0.0;
            for i in 0..n {
                let z = truncate(data.get(i, j) - center, t);
                v[i * p + j] = z;
                sum += z;
            }
            let mean = sum / n as f64;
            let w = est.weights()[j];
            for i in 0..n {
                v[i * p + j] = (v[i * p + j] - mean) * w;
            }
        }
        Ok(CenteredTable { v, p })
    }

    /// One multiplier draw: the max and min over coordinates of the
    /// weighted multiplier sums.
    fn draw(&self, multipliers: &[f64]) -> (f64, f64) {
        let mut acc = vec![0.0; self.p];
        for (&xi, row) in multipliers.iter().zip(self.v.chunks_exact(self.p)) {
            for (a, &vij) in acc.iter_mut().zip(row) {
                *a += xi * vij;
            }
        }
        let mut max = f64::NEG_INFINITY;
        let mut min = f64::INFINITY;
        for &a in &acc {
            max = max.max(a);
            min = min.min(a);
        }
        (max, min)
    }
}

/// Computes one bootstrap draw `(max, min)` for explicit multipliers.
///
/// `multipliers` must have one entry per main row. For repeated draws use
/// [`run_bootstrap`], which builds the centering table once.
pub fn bootstrap_draw(
    data: &DataMatrix,
    est: &MomEstimates,
    multipliers: &[f64],
) -> Result<(f64, f64)> {
    if multipliers.len() != data.n() {
        return Err(Error::DimensionMismatch {
            context: "bootstrap_draw",
            expected: data.n(),
            actual: multipliers.len(),
        });
    }
    let table = CenteredTable::build(data, est)?;
    Ok(table.draw(multipliers))
}

/// Sorted bootstrap draws of the max and min statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDistribution {
    sorted_max: Vec<f64>,
    sorted_min: Vec<f64>,
}

impl BootstrapDistribution {
    /// Sorts raw per-draw `(max, min)` pairs into a distribution.
    pub fn from_draws(draws: Vec<(f64, f64)>) -> Result<Self> {
        if draws.is_empty() {
            return Err(Error::invalid("draws", "need at least one bootstrap draw"));
        }
        let mut sorted_max: Vec<f64> = draws.iter().map(|d| d.0).collect();
        let mut sorted_min: Vec<f64> = draws.iter().map(|d| d.1).collect();
        sorted_max.sort_unstable_by(f64::total_cmp);
        sorted_min.sort_unstable_by(f64::total_cmp);
        Ok(BootstrapDistribution {
            sorted_max,
            sorted_min,
        })
    }

    /// Number of draws.
    pub fn b(&self) -> usize {
        self.sorted_max.len()
    }

    /// Max-statistic draws, ascending.
    pub fn sorted_max(&self) -> &[f64] {
        &self.sorted_max
    }

    /// Min-statistic draws, ascending.
    pub fn sorted_min(&self) -> &[f64] {
        &self.sorted_min
    }

    /// `gamma`-quantile of the max draws.
    pub fn max_quantile(&self, gamma: f64) -> Result<f64> {
        empirical_quantile(&self.sorted_max, gamma)
    }

    /// `gamma`-quantile of the min draws.
    pub fn min_quantile(&self, gamma: f64) -> Result<f64> {
        empirical_quantile(&self.sorted_min, gamma)
    }
}

/// Runs `b_draws` multiplier bootstrap draws with per-draw child streams.
pub fn run_bootstrap(
    data: &DataMatrix,
    est: &MomEstimates,
    b_draws: usize,
    seed: u64,
) -> Result<BootstrapDistribution> {
    if b_draws == 0 {
        return Err(Error::invalid("b_draws", "need at least one draw"));
    }
    let table = CenteredTable::build(data, est)?;
    let master = RngStream::new(seed);
    let n = data.n();
    let draws: Vec<(f64, f64)> = (0..b_draws)
        .into_par_iter()
        .map(|b| {
            let mut stream = master.child(b as u64);
            let mut xi = vec![0.0; n];
            stream.fill_normals(&mut xi);
            table.draw(&xi)
        })
        .collect();
    BootstrapDistribution::from_draws(draws)
}

/// The `ceil(gamma * B)`-th order statistic of an ascending-sorted slice,
/// for `gamma` in `(0, 1]`.
///
/// The product is computed with a small downward guard so that values such
/// as `0.95 * 500` land on 475 rather than being pushed to 476 by binary
/// round-off.
pub fn empirical_quantile(sorted: &[f64], gamma: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::invalid("sorted", "empty sample"));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid(
            "gamma",
            format!("quantile level must lie in (0, 1], got {gamma}"),
        ));
    }
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let b = sorted.len();
    let k = (gamma * b as f64 - 1e-9).ceil();
    let k = (k as usize).clamp(1, b);
    Ok(sorted[k - 1])
}
