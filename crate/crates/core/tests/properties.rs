//! Property-based tests for the algebraic invariances of the truncated,
//! partially standardized statistic and its bootstrap.

use proptest::prelude::*;

use maxband::bootstrap::{bootstrap_draw, BootstrapDistribution};
use maxband::data::{BlockScheme, DataMatrix};
use maxband::rng::RngStream;
use maxband::stats::{coordinate_stat, fit_estimates, max_min_statistic, truncate, MomEstimates};

const M_N: usize = 4;
const ELL_N: usize = 2;

/// Random dataset dimensions plus a seed; values come from an internal
/// stream so the hold-out is non-degenerate with probability one.
fn dataset_strategy() -> impl Strategy<Value = (usize, usize, u64)> {
    (4usize..10, 1usize..5, any::<u64>())
}

fn make_data(n: usize, p: usize, seed: u64) -> DataMatrix {
    let mut stream = RngStream::new(seed);
    let values: Vec<f64> = (0..(n + M_N) * p).map(|_| 10.0 * stream.normal()).collect();
    DataMatrix::new(values, n, M_N, p).unwrap()
}

fn fit(data: &DataMatrix, tau: f64) -> MomEstimates {
    fit_estimates(data, &BlockScheme::new(ELL_N, M_N).unwrap(), tau).unwrap()
}

proptest! {
    /// Adding the same constant to every entry of a coordinate shifts the
    /// estimated means with it, so bootstrap draws are unchanged.
    #[test]
    fn bootstrap_draws_are_shift_invariant(
        (n, p, seed) in dataset_strategy(),
        shift in -25.0f64..25.0,
        xi_seed in any::<u64>(),
    ) {
        let data = make_data(n, p, seed);
        let est = fit(&data, 0.9);

        let shifted_values: Vec<f64> = (0..data.total_rows())
            .flat_map(|i| (0..p).map(move |j| (i, j)))
            .map(|(i, j)| data.get(i, j) + shift)
            .collect();
        let shifted = DataMatrix::new(shifted_values, n, M_N, p).unwrap();
        let shifted_est = fit(&shifted, 0.9);

        let mut xi_stream = RngStream::new(xi_seed);
        let xi: Vec<f64> = (0..n).map(|_| xi_stream.normal()).collect();
        let (max_a, min_a) = bootstrap_draw(&data, &est, &xi).unwrap();
        let (max_b, min_b) = bootstrap_draw(&shifted, &shifted_est, &xi).unwrap();
        prop_assert!((max_a - max_b).abs() < 1e-10, "{max_a} vs {max_b}");
        prop_assert!((min_a - min_b).abs() < 1e-10, "{min_a} vs {min_b}");
    }

    /// Scaling every entry by c > 0 scales the statistic by c^(1 - tau).
    #[test]
    fn statistic_obeys_the_scale_law(
        (n, p, seed) in dataset_strategy(),
        scale in 0.02f64..50.0,
        tau in 0.0f64..=1.0,
    ) {
        let data = make_data(n, p, seed);
        let est = fit(&data, tau);
        let mu = vec![0.0; p];
        let (max_a, min_a) = max_min_statistic(&data, &mu, &est).unwrap();

        let scaled_values: Vec<f64> = (0..data.total_rows())
            .flat_map(|i| (0..p).map(move |j| (i, j)))
            .map(|(i, j)| data.get(i, j) * scale)
            .collect();
        let scaled = DataMatrix::new(scaled_values, n, M_N, p).unwrap();
        let scaled_est = fit(&scaled, tau);
        let (max_b, min_b) = max_min_statistic(&scaled, &mu, &scaled_est).unwrap();

        let factor = scale.powf(1.0 - tau);
        prop_assert!(
            (max_b - factor * max_a).abs() <= 1e-8 * (1.0 + max_b.abs()).max(factor * max_a.abs()),
            "max: {max_b} vs {} (factor {factor})", factor * max_a
        );
        prop_assert!(
            (min_b - factor * min_a).abs() <= 1e-8 * (1.0 + min_b.abs()).max(factor * min_a.abs()),
            "min: {min_b} vs {} (factor {factor})", factor * min_a
        );
    }

    /// At tau = 1 the statistic is fully studentized: rescaling any single
    /// coordinate leaves it unchanged.
    #[test]
    fn fully_studentized_statistic_ignores_per_coordinate_scales(
        (n, p, seed) in dataset_strategy(),
        scale_seed in any::<u64>(),
    ) {
        let data = make_data(n, p, seed);
        let est = fit(&data, 1.0);
        let mu = vec![0.0; p];
        let (max_a, min_a) = max_min_statistic(&data, &mu, &est).unwrap();

        let mut scale_stream = RngStream::new(scale_seed);
        let scales: Vec<f64> = (0..p).map(|_| 0.05 + 20.0 * scale_stream.uniform()).collect();
        let scaled_values: Vec<f64> = (0..data.total_rows())
            .flat_map(|i| (0..p).map(move |j| (i, j)))
            .map(|(i, j)| data.get(i, j) * scales[j])
            .collect();
        let scaled = DataMatrix::new(scaled_values, n, M_N, p).unwrap();
        let scaled_est = fit(&scaled, 1.0);
        let (max_b, min_b) = max_min_statistic(&scaled, &mu, &scaled_est).unwrap();

        prop_assert!((max_a - max_b).abs() <= 1e-8 * (1.0 + max_a.abs()));
        prop_assert!((min_a - min_b).abs() <= 1e-8 * (1.0 + min_a.abs()));
    }

    /// The clamp never exceeds its level, fixes small values, and keeps
    /// both sign and order.
    #[test]
    fn truncation_clamps_and_preserves_order(
        x in -1e6f64..1e6,
        y in -1e6f64..1e6,
        t in 0.0f64..1e6,
    ) {
        let tx = truncate(x, t);
        prop_assert!(tx.abs() <= t);
        if x.abs() <= t {
            prop_assert_eq!(tx, x);
        }
        prop_assert!(tx == 0.0 || tx.signum() == x.signum());
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(truncate(lo, t) <= truncate(hi, t));
    }

    /// The per-coordinate statistic is non-increasing in the hypothesized
    /// center.
    #[test]
    fn coordinate_statistic_is_monotone_in_the_center(
        (n, _, seed) in dataset_strategy(),
        a in -20.0f64..20.0,
        b in -20.0f64..20.0,
    ) {
        let data = make_data(n, 1, seed);
        let est = fit(&data, 0.9);
        let column: Vec<f64> = data.main_column(0).collect();
        let stat = |x: f64| {
            coordinate_stat(&column, x, est.trunc_levels()[0], est.sigma_hat(0), est.tau())
                .unwrap()
        };
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(stat(lo) >= stat(hi));
    }

    /// Empirical quantiles are sample members and monotone in the level.
    #[test]
    fn quantiles_are_members_and_monotone(
        draws in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..60),
        g1 in 0.001f64..0.999,
        g2 in 0.001f64..0.999,
    ) {
        let pairs: Vec<(f64, f64)> = draws
            .iter()
            .map(|&(a, b)| (a.max(b), a.min(b)))
            .collect();
        let boot = BootstrapDistribution::from_draws(pairs).unwrap();
        let q1 = boot.max_quantile(g1).unwrap();
        prop_assert!(boot.sorted_max().contains(&q1));
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        prop_assert!(boot.max_quantile(lo).unwrap() <= boot.max_quantile(hi).unwrap());
        prop_assert!(boot.min_quantile(lo).unwrap() <= boot.min_quantile(hi).unwrap());
    }

    /// Every multiplier draw satisfies max >= min.
    #[test]
    fn each_draw_orders_max_above_min(
        (n, p, seed) in dataset_strategy(),
        xi_seed in any::<u64>(),
    ) {
        let data = make_data(n, p, seed);
        let est = fit(&data, 0.9);
        let mut xi_stream = RngStream::new(xi_seed);
        let xi: Vec<f64> = (0..n).map(|_| xi_stream.normal()).collect();
        let (max, min) = bootstrap_draw(&data, &est, &xi).unwrap();
        prop_assert!(max >= min);
    }
}
