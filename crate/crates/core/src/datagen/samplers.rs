//! Heavy-tailed multivariate samplers.
//!
//! Two families share the covariance machinery:
//!
//! * elliptical multivariate t with 6 degrees of freedom, built as
//!   `X = eta * S * U` where `U` is uniform on the sphere and the radius
//!   satisfies `3 eta^2 / (2p) ~ F(p, 6)`, so `E(X X^T) = Sigma`;
//! * separable Pareto, `X = S * zeta` with i.i.d. standardized Pareto(6)
//!   coordinates (raw mean 6/5, raw variance 6/100).
//!
//! Rows are generated from per-row child streams, so a dataset is a pure
//! function of `(stream seed, row index)` and can be produced in parallel.

use rayon::prelude::*;

use crate::rng::RngStream;

use super::CovarianceModel;

/// Vector of `p` i.i.d. standard normals.
pub fn sample_gaussian_vector(stream: &mut RngStream, p: usize) -> Vec<f64> {
    let mut v = vec![0.0; p];
    stream.fill_normals(&mut v);
    v
}

/// Chi-square variate with `k` degrees of freedom.
fn chi_square(stream: &mut RngStream, k: usize) -> f64 {
    (0..k).map(|_| stream.normal().powi(2)).sum()
}

/// Raw Pareto(6) variate on `[1, inf)`: `(1 - U)^{-1/6}`.
///
/// Mean `6/5`, variance `6/100`.
pub fn sample_pareto_raw(stream: &mut RngStream) -> f64 {
    (1.0 - stream.uniform()).powf(-1.0 / 6.0)
}

/// Standardized Pareto(6) variate: zero mean, unit variance.
pub fn sample_pareto_std(stream: &mut RngStream) -> f64 {
    (sample_pareto_raw(stream) - 1.2) / 0.06f64.sqrt()
}

/// Radius for the p-dimensional elliptical t with 6 degrees of freedom.
///
/// `eta = sqrt((2p/3) F)` with `F ~ F(p, 6)`, which gives `E(eta^2) = p`.
pub fn sample_eta_t6(stream: &mut RngStream, p: usize) -> f64 {
    let numer = chi_square(stream, p) / p as f64;
    let denom = chi_square(stream, 6) / 6.0;
    let f = numer / denom;
    (2.0 * p as f64 / 3.0 * f).sqrt()
}

/// Uniform direction on the unit sphere in `R^p`.
fn unit_direction(stream: &mut RngStream, p: usize) -> Vec<f64> {
    loop {
        let mut z = sample_gaussian_vector(stream, p);
        let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in z.iter_mut() {
                *x /= norm;
            }
            return z;
        }
    }
}

/// `n_rows` draws of the elliptical t(6) vector with covariance
/// `model.sigma()`, row-major. Row `i` comes from `stream.child(i)`.
pub fn sample_elliptical_t6(
    stream: &RngStream,
    n_rows: usize,
    model: &CovarianceModel,
) -> Vec<f64> {
    let p = model.p();
    let rows: Vec<Vec<f64>> = (0..n_rows)
        .into_par_iter()
        .map(|i| {
            let mut rs = stream.child(i as u64);
            let eta = sample_eta_t6(&mut rs, p);
            let u = unit_direction(&mut rs, p);
            let mut x = model
                .sqrt_sigma()
                .matvec(&u)
                .expect("cached root has dimension p");
            for v in x.iter_mut() {
                *v *= eta;
            }
            x
        })
        .collect();
    rows.concat()
}

/// `n_rows` draws of the separable Pareto(6) vector with covariance
/// `model.sigma()`, row-major. Row `i` comes from `stream.child(i)`.
pub fn sample_separable_pareto6(
    stream: &RngStream,
    n_rows: usize,
    model: &CovarianceModel,
) -> Vec<f64> {
    let p = model.p();
    let rows: Vec<Vec<f64>> = (0..n_rows)
        .into_par_iter()
        .map(|i| {
            let mut rs = stream.child(i as u64);
            let zeta: Vec<f64> = (0..p).map(|_| sample_pareto_std(&mut rs)).collect();
            model
                .sqrt_sigma()
                .matvec(&zeta)
                .expect("cached root has dimension p")
        })
        .collect();
    rows.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{CorrelationKind, CorrelationSpec};

    #[test]
    fn gaussian_vector_is_deterministic_with_standard_moments() {
        let mut a = RngStream::new(10);
        let mut b = RngStream::new(10);
        assert_eq!(
            sample_gaussian_vector(&mut a, 8),
            sample_gaussian_vector(&mut b, 8)
        );

        let mut s = RngStream::new(99);
        let m = 100_000;
        let draws = sample_gaussian_vector(&mut s, m);
        let mean = draws.iter().sum::<f64>() / m as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "variance {var}");

        let parent = RngStream::new(4);
        let mut c0 = parent.child(0);
        let mut c1 = parent.child(1);
        assert_ne!(
            sample_gaussian_vector(&mut c0, 4),
            sample_gaussian_vector(&mut c1, 4)
        );
    }

    #[test]
    fn pareto_raw_moments_match_closed_form() {
        // Pareto(a=6) on [1, inf): mean a/(a-1) = 1.2 and
        // variance a/((a-1)^2 (a-2)) = 0.06.
        let mut s = RngStream::new(321);
        let m = 100_000;
        let draws: Vec<f64> = (0..m).map(|_| sample_pareto_raw(&mut s)).collect();
        assert!(draws.iter().all(|&x| x >= 1.0));
        let mean = draws.iter().sum::<f64>() / m as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64;
        assert!((mean - 1.2).abs() < 0.02, "raw mean {mean}");
        assert!((var - 0.06).abs() < 0.01, "raw variance {var}");

        let mut s = RngStream::new(654);
        let std_draws: Vec<f64> = (0..m).map(|_| sample_pareto_std(&mut s)).collect();
        let mean = std_draws.iter().sum::<f64>() / m as f64;
        let var = std_draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64;
        assert!(mean.abs() < 0.02, "standardized mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "standardized variance {var}");
        // Right-skewed marginal.
        let skew =
            std_draws.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / (m as f64 * var.powf(1.5));
        assert!(skew > 0.5, "skewness {skew}");
    }

    #[test]
    fn eta_radius_is_nonnegative_with_mean_square_p() {
        let p = 50;
        let mut s = RngStream::new(777);
        let m = 10_000;
        let mut sum_sq = 0.0;
        for _ in 0..m {
            let eta = sample_eta_t6(&mut s, p);
            assert!(eta >= 0.0);
            sum_sq += eta * eta;
        }
        // E F(p, 6) = 6/4, so E eta^2 / p = 1.
        let ratio = sum_sq / (m as f64 * p as f64);
        assert!((ratio - 1.0).abs() < 0.15, "mean eta^2/p = {ratio}");

        let mut a = RngStream::new(5);
        let mut b = RngStream::new(5);
        assert_eq!(sample_eta_t6(&mut a, p), sample_eta_t6(&mut b, p));
    }

    #[test]
    fn unit_direction_has_unit_norm() {
        let mut s = RngStream::new(31);
        for _ in 0..100 {
            let u = unit_direction(&mut s, 7);
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    fn sample_covariance(rows: &[f64], n: usize, p: usize) -> Vec<f64> {
        let mut means = vec![0.0; p];
        for i in 0..n {
            for j in 0..p {
                means[j] += rows[i * p + j];
            }
        }
        for m in means.iter_mut() {
            *m /= n as f64;
        }
        let mut cov = vec![0.0; p * p];
        for i in 0..n {
            for j in 0..p {
                let dj = rows[i * p + j] - means[j];
                for k in 0..p {
                    cov[j * p + k] += dj * (rows[i * p + k] - means[k]);
                }
            }
        }
        for c in cov.iter_mut() {
            *c /= n as f64;
        }
        cov
    }

    fn decayed_ar_model(p: usize) -> CovarianceModel {
        CovarianceModel::variance_decay(CorrelationSpec {
            kind: CorrelationKind::Autoregressive(0.5),
            p,
        })
        .unwrap()
    }

    #[test]
    fn elliptical_rows_reproduce_sigma() {
        let p = 5;
        let model = decayed_ar_model(p);
        let stream = RngStream::new(2718);
        let n = 100_000;
        let rows = sample_elliptical_t6(&stream, n, &model);
        let cov = sample_covariance(&rows, n, p);
        let mut max_sigma = 0.0f64;
        for i in 0..p {
            for j in 0..p {
                max_sigma = max_sigma.max(model.sigma().get(i, j).abs());
            }
        }
        for i in 0..p {
            for j in 0..p {
                let err = (cov[i * p + j] - model.sigma().get(i, j)).abs();
                assert!(err < 0.05 * max_sigma, "cov[{i}][{j}] off by {err}");
            }
        }
        // Marginal excess kurtosis of t(6) is 6/(6-4) = 3.
        let col: Vec<f64> = (0..n).map(|i| rows[i * p]).collect();
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let m4 = col.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
        let excess = m4 / (var * var) - 3.0;
        assert!((excess - 3.0).abs() < 1.0, "excess kurtosis {excess}");
    }

    #[test]
    fn separable_rows_reproduce_sigma() {
        let p = 5;
        let model = decayed_ar_model(p);
        let stream = RngStream::new(1414);
        let n = 100_000;
        let rows = sample_separable_pareto6(&stream, n, &model);
        let cov = sample_covariance(&rows, n, p);
        let mut max_sigma = 0.0f64;
        for i in 0..p {
            for j in 0..p {
                max_sigma = max_sigma.max(model.sigma().get(i, j).abs());
            }
        }
        for i in 0..p {
            for j in 0..p {
                let err = (cov[i * p + j] - model.sigma().get(i, j)).abs();
                assert!(err < 0.05 * max_sigma, "cov[{i}][{j}] off by {err}");
            }
        }
    }

    #[test]
    fn identity_model_gives_independent_pareto_coordinates() {
        // With R = I and unit standard deviations the root is the identity,
        // so each coordinate is exactly the standardized Pareto draw.
        let model = CovarianceModel::new(
            vec![1.0; 3],
            CorrelationSpec {
                kind: CorrelationKind::Identity,
                p: 3,
            },
        )
        .unwrap();
        let stream = RngStream::new(8);
        let rows = sample_separable_pareto6(&stream, 4, &model);
        for i in 0..4 {
            let mut rs = stream.child(i as u64);
            for j in 0..3 {
                let expect = sample_pareto_std(&mut rs);
                assert!((rows[i * 3 + j] - expect).abs() < 1e-12);
            }
        }
    }
}
