//! Simultaneous confidence intervals and zero-exclusion tests built on the
//! bootstrap quantiles.
//!
//! For coordinate `j` the interval is the sandwich set
//! `{x : q_minus <= g_j(x) <= q_plus}` where `g_j` is the truncated,
//! standardized main-sample statistic. Because `phi_t` is a clamp, `g_j` is
//! continuous, non-increasing, and piecewise linear in `x` with breakpoints
//! at `X_ij - t_j` and `X_ij + t_j`; the inversion is exact, not a grid
//! search. `g_j` saturates at `+/- sqrt(n) t_j / sigma_j^tau` on the tails,
//! so a quantile beyond that range yields an infinite endpoint, and
//! quantiles outside the attainable range on both sides yield an empty set.

use rayon::prelude::*;

use crate::bootstrap::BootstrapDistribution;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::stats::{truncate, MomEstimates};

/// One simultaneous confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    /// The quantile sandwich admits no solution (both quantiles fall on
    /// the same side of the statistic's attainable range).
    Empty,
    /// Closed interval; an endpoint is `-inf`/`+inf` when the statistic
    /// saturates before reaching the corresponding quantile.
    Span { lo: f64, hi: f64 },
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Interval::Empty => false,
            Interval::Span { lo, hi } => lo <= x && x <= hi,
        }
    }

    /// `(lo, hi)` for a non-empty interval.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Interval::Empty => None,
            Interval::Span { lo, hi } => Some((lo, hi)),
        }
    }

    /// Width `hi - lo`; infinite for unbounded spans, `None` when empty.
    pub fn width(&self) -> Option<f64> {
        self.bounds().map(|(lo, hi)| hi - lo)
    }

    /// True for a span with two finite endpoints.
    pub fn is_bounded(&self) -> bool {
        matches!(*self, Interval::Span { lo, hi } if lo.is_finite() && hi.is_finite())
    }
}

/// All `p` simultaneous intervals plus the quantiles that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBand {
    pub intervals: Vec<Interval>,
    pub alpha: f64,
    pub q_minus: f64,
    pub q_plus: f64,
}

impl ConfidenceBand {
    /// True when every interval is a bounded span containing `mu[j]`.
    pub fn covers(&self, mu: &[f64]) -> bool {
        mu.len() == self.intervals.len()
            && self.intervals.iter().zip(mu).all(|(iv, &m)| iv.contains(m))
    }
}

/// Outcome of the zero-exclusion test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub reject: bool,
    pub p_value: f64,
    /// Max of `g_j(0)` over the tested coordinates.
    pub max_stat: f64,
    /// Min of `g_j(0)` over the tested coordinates.
    pub min_stat: f64,
    pub q_minus: f64,
    pub q_plus: f64,
    pub alpha: f64,
    /// Tested coordinates whose statistic falls outside `[q_minus, q_plus]`.
    pub offenders: Vec<usize>,
}

/// Inverts the quantile sandwich for one coordinate.
///
/// Returns the maximal set `{x : q_minus <= g(x) <= q_plus}` where
/// `g(x) = sum_i phi_t(X_i - x) / (sigma^tau sqrt(n))` over `main_column`.
/// Endpoints are found by bisecting the sorted breakpoints with exact
/// evaluations of `g`, then interpolating on the final linear piece.
pub fn invert_interval(
    main_column: &[f64],
    trunc_level: f64,
    sigma_hat: f64,
    tau: f64,
    q_minus: f64,
    q_plus: f64,
) -> Result<Interval> {
    if main_column.is_empty() {
        return Err(Error::invalid("main_column", "must be non-empty"));
    }
    if !(sigma_hat.is_finite() && sigma_hat > 0.0) {
        return Err(Error::invalid(
            "sigma_hat",
            format!("scale must be positive and finite, got {sigma_hat}"),
        ));
    }
    if !(trunc_level.is_finite() && trunc_level >= 0.0) {
        return Err(Error::invalid(
            "trunc_level",
            format!("truncation level must be non-negative, got {trunc_level}"),
        ));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::invalid(
            "tau",
            format!("must lie in [0, 1], got {tau}"),
        ));
    }
    if !(q_minus.is_finite() && q_plus.is_finite() && q_minus <= q_plus) {
        return Err(Error::invalid(
            "quantiles",
            format!("need finite q_minus <= q_plus, got ({q_minus}, {q_plus})"),
        ));
    }

    let n = main_column.len() as f64;
    let weight = 1.0 / (sigma_hat.powf(tau) * n.sqrt());
    // Attainable range of g: +/- n * t * w on the flat tails.
    let g_sup = n * trunc_level * weight;

    if q_plus < -g_sup || q_minus > g_sup {
        return Ok(Interval::Empty);
    }

    let g = |x: f64| -> f64 {
        main_column
            .iter()
            .map(|&v| truncate(v - x, trunc_level))
            .sum::<f64>()
            * weight
    };

    // Breakpoints of the piecewise-linear g, ascending.
    let mut points: Vec<f64> = Vec::with_capacity(2 * main_column.len());
    for &v in main_column {
        points.push(v - trunc_level);
        points.push(v + trunc_level);
    }
    points.sort_unstable_by(f64::total_cmp);

    // Smallest index whose g-value fails `keep`; g(points[i]) is
    // non-increasing in i, so `keep` holds on a prefix.
    let first_failing = |keep: &dyn Fn(f64) -> bool| -> usize {
        let (mut lo, mut hi) = (0usize, points.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if keep(g(points[mid])) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    };

    let lo = if q_plus >= g_sup {
        f64::NEG_INFINITY
    } else {
        // Smallest x with g(x) <= q_plus: bracket the descent through
        // q_plus between consecutive breakpoints, then interpolate.
        let k = first_failing(&|gv| gv > q_plus);
        // g(points[0]) = g_sup > q_plus and g(points[last]) = -g_sup <= q_plus.
        debug_assert!(k > 0 && k < points.len());
        let (x0, x1) = (points[k - 1], points[k.min(points.len() - 1)]);
        let (g0, g1) = (g(x0), g(x1));
        if g0 <= q_plus {
            x0
        } else {
            x0 + (g0 - q_plus) / (g0 - g1) * (x1 - x0)
        }
    };

    let hi = if q_minus <= -g_sup {
        f64::INFINITY
    } else {
        // Largest x with g(x) >= q_minus: last breakpoint still above, then
        // interpolate into the piece that crosses below.
        let k = first_failing(&|gv| gv >= q_minus);
        // k >= 1 because g(points[0]) = g_sup >= q_minus in this branch.
        let (x0, x1) = (points[k - 1], points[k.min(points.len() - 1)]);
        let (g0, g1) = (g(x0), g(x1));
        if g0 <= q_minus || g0 <= g1 {
            x0
        } else {
            x0 + (g0 - q_minus) / (g0 - g1) * (x1 - x0)
        }
    };

    Ok(Interval::Span { lo, hi })
}

/// Builds all `p` simultaneous intervals from a bootstrap distribution.
///
/// Quantiles: `q_plus` is the `(1 - alpha/2)`-quantile of the max draws and
/// `q_minus` the `(alpha/2)`-quantile of the min draws.
pub fn simultaneous_cis(
    data: &DataMatrix,
    est: &MomEstimates,
    boot: &BootstrapDistribution,
    alpha: f64,
) -> Result<ConfidenceBand> {
    check_alpha(alpha)?;
    check_est(data, est)?;
    let q_plus = boot.max_quantile(1.0 - alpha / 2.0)?;
    let q_minus = boot.min_quantile(alpha / 2.0)?;
    let intervals: Vec<Interval> = (0..data.p())
        .into_par_iter()
        .map(|j| {
            let column: Vec<f64> = data.main_column(j).collect();
            invert_interval(
                &column,
                est.trunc_levels()[j],
                est.sigma_hat(j),
                est.tau(),
                q_minus,
                q_plus,
            )
        })
        .collect::<Result<_>>()?;
    Ok(ConfidenceBand {
        intervals,
        alpha,
        q_minus,
        q_plus,
    })
}

/// Tests whether any requested coordinate excludes mean zero.
///
/// Rejects when the max statistic exceeds `q_plus` or the min statistic
/// falls below `q_minus`; `offenders` lists every violating coordinate.
pub fn zero_exclusion_test(
    data: &DataMatrix,
    est: &MomEstimates,
    boot: &BootstrapDistribution,
    alpha: f64,
    coords: &[usize],
) -> Result<TestOutcome> {
    check_alpha(alpha)?;
    check_est(data, est)?;
    if coords.is_empty() {
        return Err(Error::invalid(
            "coords",
            "must name at least one coordinate",
        ));
    }
    if let Some(&bad) = coords.iter().find(|&&j| j >= data.p()) {
        return Err(Error::invalid(
            "coords",
            format!("coordinate {bad} out of range for p = {}", data.p()),
        ));
    }
    let q_plus = boot.max_quantile(1.0 - alpha / 2.0)?;
    let q_minus = boot.min_quantile(alpha / 2.0)?;

    let mut max_stat = f64::NEG_INFINITY;
    let mut min_stat = f64::INFINITY;
    let mut offenders = Vec::new();
    for &j in coords {
        let t = est.trunc_levels()[j];
        let w = est.weights()[j];
        let g: f64 = data.main_column(j).map(|x| truncate(x, t)).sum::<f64>() * w;
        max_stat = max_stat.max(g);
        min_stat = min_stat.min(g);
        if g > q_plus || g < q_minus {
            offenders.push(j);
        }
    }
    let reject = max_stat > q_plus || min_stat < q_minus;
    let p = p_value(boot, max_stat, min_stat);
    Ok(TestOutcome {
        reject,
        p_value: p,
        max_stat,
        min_stat,
        q_minus,
        q_plus,
        alpha,
        offenders,
    })
}

/// Two-sided Monte Carlo p-value with the add-one convention:
/// `p = min(1, 2 min(p_plus, p_minus))` where
/// `p_plus = (1 + #{max draws >= max_stat}) / (B + 1)` and
/// `p_minus = (1 + #{min draws <= min_stat}) / (B + 1)`.
pub fn p_value(boot: &BootstrapDistribution, max_stat: f64, min_stat: f64) -> f64 {
    let b = boot.b();
    let count_ge = b - boot.sorted_max().partition_point(|&v| v < max_stat);
    let count_le = boot.sorted_min().partition_point(|&v| v <= min_stat);
    let p_plus = (1 + count_ge) as f64 / (b + 1) as f64;
    let p_minus = (1 + count_le) as f64 / (b + 1) as f64;
    (2.0 * p_plus.min(p_minus)).min(1.0)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(
            "alpha",
            format!("level must lie in (0, 1), got {alpha}"),
        ));
    }
    Ok(())
}

fn check_est(data: &DataMatrix, est: &MomEstimates) -> Result<()> {
    if est.p() != data.p() {
        return Err(Error::DimensionMismatch {
            context: "inference",
            expected: data.p(),
            actual: est.p(),
        });
    }
    if est.n() != data.n() {
        return Err(Error::DimensionMismatch {
            context: "inference",
            expected: data.n(),
            actual: est.n(),
        });
    }
    Ok(())
}
