//! Functional data support: curves on equispaced grids, the Fourier cosine
//! basis, geometric Brownian motion paths, and the zero-mean test for
//! projected curves.
//!
//! A functional null hypothesis ("no drift", "constant mean curve") is
//! translated into a finite-dimensional one by projecting each observed
//! curve onto the first cosine basis elements with trapezoidal quadrature;
//! the projected coefficient vectors then feed the max-statistic bootstrap
//! test of mean zero.
//!
//! Curves either include `t = 0` or start one step above it (as return
//! curves do). In the latter case quadrature extends the curve to zero by
//! copying its first value. On the resulting full equispaced partition of
//! `[0, 1]` the trapezoid rule integrates `cos(m pi t)` to exactly zero for
//! every `1 <= m < 2K`, so constant curves project to exactly zero on all
//! non-constant basis elements - the hypothesis "the mean curve is
//! constant" survives discretization unharmed.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use crate::data::{BlockScheme, DataMatrix};
use crate::error::{Error, Result};
use crate::inference::{zero_exclusion_test, TestOutcome};
use crate::rng::RngStream;
use crate::stats::fit_estimates;

/// Tolerance for grid comparisons (equispacing, endpoints, curve-to-curve
/// agreement).
const GRID_TOL: f64 = 1e-12;

/// A real-valued curve sampled on an equispaced grid over `(0, 1]` or
/// `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl CurveSample {
    /// Wraps explicit grid points and values.
    ///
    /// The grid must be equispaced (within `1e-12`), end at `1`, and start
    /// either at `0` or exactly one step above it.
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::invalid("grid", "need at least two grid points"));
        }
        if grid.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "CurveSample::new",
                expected: grid.len(),
                actual: values.len(),
            });
        }
        let step = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::invalid("grid", "grid must be strictly increasing"));
        }
        for w in grid.windows(2) {
            if ((w[1] - w[0]) - step).abs() > GRID_TOL {
                return Err(Error::invalid(
                    "grid",
                    format!("grid is not equispaced: step {} vs {}", w[1] - w[0], step),
                ));
            }
        }
        if (grid[grid.len() - 1] - 1.0).abs() > GRID_TOL {
            return Err(Error::invalid(
                "grid",
                format!("grid must end at 1, got {}", grid[grid.len() - 1]),
            ));
        }
        if grid[0].abs() > GRID_TOL && (grid[0] - step).abs() > GRID_TOL {
            return Err(Error::invalid(
                "grid",
                format!("grid must start at 0 or one step above it, got {}", grid[0]),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "curve values must be finite"));
        }
        Ok(CurveSample { grid, values })
    }

    /// Curve on the full grid `t_k = k / K`, `k = 0..=K`.
    pub fn on_full_grid(values: Vec<f64>) -> Result<Self> {
        let k = values.len().saturating_sub(1).max(1);
        let grid = (0..values.len()).map(|i| i as f64 / k as f64).collect();
        CurveSample::new(grid, values)
    }

    /// Curve on the interior grid `t_k = k / K`, `k = 1..=K`.
    pub fn on_interior_grid(values: Vec<f64>) -> Result<Self> {
        let k = values.len();
        let grid = (1..=k).map(|i| i as f64 / k as f64).collect();
        CurveSample::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Common grid step.
    pub fn step(&self) -> f64 {
        (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64
    }

    /// Whether the grid includes `t = 0`.
    pub fn starts_at_zero(&self) -> bool {
        self.grid[0].abs() <= GRID_TOL
    }

    /// Grid and values extended to `t = 0` by copying the first value, or
    /// borrowed unchanged if the grid already starts there.
    fn extended(&self) -> (Vec<f64>, Vec<f64>) {
        if self.starts_at_zero() {
            (self.grid.clone(), self.values.clone())
        } else {
            let mut grid = Vec::with_capacity(self.grid.len() + 1);
            grid.push(0.0);
            grid.extend_from_slice(&self.grid);
            let mut values = Vec::with_capacity(self.values.len() + 1);
            values.push(self.values[0]);
            values.extend_from_slice(&self.values);
            (grid, values)
        }
    }

    /// Checks that two curves share one grid.
    fn same_grid(&self, other: &CurveSample) -> bool {
        self.grid.len() == other.grid.len()
            && self
                .grid
                .iter()
                .zip(&other.grid)
                .all(|(a, b)| (a - b).abs() <= GRID_TOL)
    }
}

/// Orthonormal cosine basis on `[0, 1]`: `phi_1 = 1` and
/// `phi_j(t) = sqrt(2) cos((j-1) pi t)` for `j >= 2`.
///
/// Panics if `j < 1`; basis indices are 1-based.
pub fn cosine_basis(j: usize, t: f64) -> f64 {
    assert!(j >= 1, "basis index is 1-based, got {j}");
    if j == 1 {
        1.0
    } else {
        SQRT_2 * ((j - 1) as f64 * PI * t).cos()
    }
}

/// Trapezoidal integral of samples `fs` over the points `ts`.
fn trapezoid(ts: &[f64], fs: &[f64]) -> f64 {
    ts.windows(2)
        .zip(fs.windows(2))
        .map(|(t, f)| (t[1] - t[0]) * (f[0] + f[1]) * 0.5)
        .sum()
}

/// Projects a curve on `count` cosine coefficients starting at basis index
/// `start_index` (1-based), via trapezoidal quadrature.
pub fn project_curve(curve: &CurveSample, start_index: usize, count: usize) -> Result<Vec<f64>> {
    if start_index < 1 {
        return Err(Error::invalid("start_index", "basis indices are 1-based"));
    }
    if count == 0 {
        return Err(Error::invalid("count", "need at least one coefficient"));
    }
    let (ts, fs) = curve.extended();
    Ok((start_index..start_index + count)
        .map(|j| {
            let integrand: Vec<f64> = ts
                .iter()
                .zip(&fs)
                .map(|(&t, &f)| f * cosine_basis(j, t))
                .collect();
            trapezoid(&ts, &integrand)
        })
        .collect())
}

/// Geometric Brownian motion specification on `K` steps of `[0, 1]`:
///
/// ```text
/// S(t_k) = exp((h mu(t_k) - varsigma0^2 / 2) t_k + varsigma0 W(t_k))
/// ```
///
/// with `W` a standard Brownian motion sampled at increments of `1/K`.
#[derive(Debug, Clone, PartialEq)]
pub struct GbmSpec {
    h: f64,
    /// Drift curve on the full grid, `k_steps + 1` values.
    mu: Vec<f64>,
    varsigma0: f64,
    k_steps: usize,
}

impl GbmSpec {
    pub fn new(h: f64, mu: Vec<f64>, varsigma0: f64, k_steps: usize) -> Result<Self> {
        if k_steps < 1 {
            return Err(Error::invalid("k_steps", "need at least one step"));
        }
        if mu.len() != k_steps + 1 {
            return Err(Error::DimensionMismatch {
                context: "GbmSpec::new",
                expected: k_steps + 1,
                actual: mu.len(),
            });
        }
        if !(h.is_finite() && h >= 0.0) {
            return Err(Error::invalid(
                "h",
                format!("drift scale must be non-negative, got {h}"),
            ));
        }
        if !(varsigma0.is_finite() && varsigma0 >= 0.0) {
            return Err(Error::invalid(
                "varsigma0",
                format!("volatility must be non-negative, got {varsigma0}"),
            ));
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("mu", "drift curve must be finite"));
        }
        Ok(GbmSpec {
            h,
            mu,
            varsigma0,
            k_steps,
        })
    }

    /// Constant drift curve `mu(t) = mu_level`.
    pub fn constant(h: f64, mu_level: f64, varsigma0: f64, k_steps: usize) -> Result<Self> {
        GbmSpec::new(h, vec![mu_level; k_steps + 1], varsigma0, k_steps)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn k_steps(&self) -> usize {
        self.k_steps
    }
}

/// Samples one GBM path on the full grid `t_k = k / K`.
pub fn sample_gbm(stream: &mut RngStream, spec: &GbmSpec) -> CurveSample {
    let k_steps = spec.k_steps;
    let dt = 1.0 / k_steps as f64;
    let sqrt_dt = dt.sqrt();
    let vol2_half = spec.varsigma0 * spec.varsigma0 / 2.0;
    let mut values = Vec::with_capacity(k_steps + 1);
    values.push(1.0);
    let mut w = 0.0;
    for k in 1..=k_steps {
        w += sqrt_dt * stream.normal();
        let t = k as f64 * dt;
        let drift = (spec.h * spec.mu[k] - vol2_half) * t;
        values.push((drift + spec.varsigma0 * w).exp());
    }
    CurveSample::on_full_grid(values).expect("constructed grid is valid")
}

/// Recovers `(mu curve, varsigma0)` from cumulative log-return curves.
///
/// Given curves `R_i(t) = ln S_i(t)`, the pointwise sample variance is
/// `varsigma0^2 t`, so `varsigma0 = sqrt(2 integral of s^2)`; the drift at
/// interior points (taking `h = 1`) is `mean(R)(t)/t + varsigma0^2/2`, and
/// the value at `t = 0`, where the ratio is undefined, copies the first
/// interior point. The returned curve aligns with the input grid.
pub fn calibrate_gbm(curves: &[CurveSample]) -> Result<(Vec<f64>, f64)> {
    if curves.len() < 2 {
        return Err(Error::TooFewCurves {
            needed: 2,
            got: curves.len(),
        });
    }
    let first = &curves[0];
    for (i, c) in curves.iter().enumerate().skip(1) {
        if !first.same_grid(c) {
            return Err(Error::GridMismatch {
                reason: format!("curve {i} is on a different grid than curve 0"),
            });
        }
    }
    let m = curves.len() as f64;
    let len = first.len();
    let mut mean = vec![0.0; len];
    let mut s2 = vec![0.0; len];
    for c in curves {
        for (k, &v) in c.values().iter().enumerate() {
            mean[k] += v;
        }
    }
    for v in mean.iter_mut() {
        *v /= m;
    }
    for c in curves {
        for (k, &v) in c.values().iter().enumerate() {
            s2[k] += (v - mean[k]) * (v - mean[k]);
        }
    }
    for v in s2.iter_mut() {
        *v /= m - 1.0;
    }

    // Integrate the variance profile over [0, 1] (extending to t = 0 by
    // constant continuation when the grid omits it, as in projection).
    let s2_curve = CurveSample::new(first.grid().to_vec(), s2.clone())?;
    let (ts, fs) = s2_curve.extended();
    let integral = trapezoid(&ts, &fs);
    let varsigma0 = (2.0 * integral).max(0.0).sqrt();

    let vol2_half = varsigma0 * varsigma0 / 2.0;
    let mut mu = vec![0.0; len];
    for k in 0..len {
        let t = first.grid()[k];
        if t.abs() > GRID_TOL {
            mu[k] = mean[k] / t + vol2_half;
        }
    }
    if first.starts_at_zero() {
        mu[0] = mu[1];
    }
    Ok((mu, varsigma0))
}

/// Projects every curve and assembles the coefficient data matrix, taking
/// the last `m_n` curves as the hold-out sample.
pub fn coefficient_matrix(
    curves: &[CurveSample],
    start_index: usize,
    p: usize,
    m_n: usize,
) -> Result<DataMatrix> {
    if curves.len() < m_n + 2 {
        return Err(Error::TooFewCurves {
            needed: m_n + 2,
            got: curves.len(),
        });
    }
    let first = &curves[0];
    for (i, c) in curves.iter().enumerate().skip(1) {
        if !first.same_grid(c) {
            return Err(Error::GridMismatch {
                reason: format!("curve {i} is on a different grid than curve 0"),
            });
        }
    }
    let rows: Vec<Vec<f64>> = curves
        .par_iter()
        .map(|c| project_curve(c, start_index, p))
        .collect::<Result<_>>()?;
    DataMatrix::from_rows(&rows, m_n)
}

/// Tests whether the projected mean coefficients are all zero.
///
/// Projects the curves on `p` basis elements starting at `start_index`,
/// fits hold-out estimates under `scheme`, runs `b_draws` bootstrap draws,
/// and applies the zero-exclusion test over all projected coordinates.
#[allow(clippy::too_many_arguments)]
pub fn functional_zero_test(
    curves: &[CurveSample],
    start_index: usize,
    p: usize,
    scheme: &BlockScheme,
    tau: f64,
    alpha: f64,
    b_draws: usize,
    seed: u64,
) -> Result<TestOutcome> {
    let data = coefficient_matrix(curves, start_index, p, scheme.m_n())?;
    let est = fit_estimates(&data, scheme, tau)?;
    let boot = crate::bootstrap::run_bootstrap(&data, &est, b_draws, seed)?;
    let coords: Vec<usize> = (0..p).collect();
    zero_exclusion_test(&data, &est, &boot, alpha, &coords)
}
