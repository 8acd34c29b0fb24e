//! Synthetic data generation for the Monte Carlo studies: structured
//! covariance models and heavy-tailed multivariate samplers.
//!
//! Covariances follow `Sigma = D^{1/2} R D^{1/2}` where `R` is a structured
//! correlation matrix and `D^{1/2}` holds per-coordinate standard
//! deviations; the default decay profile is `D_jj^{1/2} = j^{-1/2}`, so
//! later coordinates carry less signal.

mod samplers;

pub use samplers::{
    sample_elliptical_t6, sample_eta_t6, sample_gaussian_vector, sample_pareto_raw,
    sample_pareto_std, sample_separable_pareto6,
};

use crate::error::{Error, Result};
use crate::linalg::{matrix_sqrt, Matrix};

/// Correlation structure of the generated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationKind {
    /// `R_ij = r^{|i-j|}` for a coefficient `r` in `(0, 1)`.
    Autoregressive(f64),
    /// `R_ij = 1` on the diagonal, `1 / (4 (i-j)^2)` off it.
    AlgebraicDecay,
    Identity,
    /// A caller-supplied correlation matrix.
    Explicit(Matrix),
}

/// Correlation kind plus the dimension it should be realized at.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpec {
    pub kind: CorrelationKind,
    pub p: usize,
}

/// Materializes the correlation matrix for a spec.
pub fn gen_correlation(spec: &CorrelationSpec) -> Result<Matrix> {
    let p = spec.p;
    if p == 0 {
        return Err(Error::invalid("p", "dimension must be at least 1"));
    }
    match &spec.kind {
        CorrelationKind::Autoregressive(r) => {
            if !(r.is_finite() && *r > 0.0 && *r < 1.0) {
                return Err(Error::invalid(
                    "ar_coefficient",
                    format!("autoregressive coefficient must lie in (0, 1), got {r}"),
                ));
            }
            let mut m = Matrix::zeros(p, p);
            for i in 0..p {
                for j in 0..p {
                    m.set(i, j, r.powi((i as i32 - j as i32).abs()));
                }
            }
            Ok(m)
        }
        CorrelationKind::AlgebraicDecay => {
            let mut m = Matrix::identity(p);
            for i in 0..p {
                for j in 0..p {
                    if i != j {
                        let d = i as f64 - j as f64;
                        m.set(i, j, 1.0 / (4.0 * d * d));
                    }
                }
            }
            Ok(m)
        }
        CorrelationKind::Identity => Ok(Matrix::identity(p)),
        CorrelationKind::Explicit(m) => {
            if m.rows() != p || m.cols() != p {
                return Err(Error::DimensionMismatch {
                    context: "gen_correlation",
                    expected: p,
                    actual: m.rows().max(m.cols()),
                });
            }
            for j in 0..p {
                if (m.get(j, j) - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(
                        "correlation",
                        format!("diagonal entry {j} is {}, expected 1", m.get(j, j)),
                    ));
                }
            }
            Ok(m.clone())
        }
    }
}

/// Covariance `Sigma = D^{1/2} R D^{1/2}` with its symmetric square root
/// cached for repeated sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceModel {
    std_devs: Vec<f64>,
    corr: CorrelationSpec,
    sigma: Matrix,
    sqrt_sigma: Matrix,
}

impl CovarianceModel {
    /// Builds the model from explicit per-coordinate standard deviations.
    pub fn new(std_devs: Vec<f64>, corr: CorrelationSpec) -> Result<Self> {
        if std_devs.len() != corr.p {
            return Err(Error::DimensionMismatch {
                context: "CovarianceModel::new",
                expected: corr.p,
                actual: std_devs.len(),
            });
        }
        if let Some(bad) = std_devs.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::invalid(
                "std_devs",
                format!("standard deviations must be positive and finite, got {bad}"),
            ));
        }
        let r = gen_correlation(&corr)?;
        let p = corr.p;
        let mut sigma = Matrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                sigma.set(i, j, std_devs[i] * std_devs[j] * r.get(i, j));
            }
        }
        let sqrt_sigma = matrix_sqrt(&sigma)?;
        Ok(CovarianceModel {
            std_devs,
            corr,
            sigma,
            sqrt_sigma,
        })
    }

    /// Standard decay profile: the j-th standard deviation is `j^{-1/2}`
    /// (1-based), so variances fall off like `1/j`.
    pub fn variance_decay(corr: CorrelationSpec) -> Result<Self> {
        let std_devs = (1..=corr.p).map(|j| (j as f64).powf(-0.5)).collect();
        CovarianceModel::new(std_devs, corr)
    }

    pub fn p(&self) -> usize {
        self.corr.p
    }

    pub fn std_devs(&self) -> &[f64] {
        &self.std_devs
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    /// Symmetric square root `S` with `S S = Sigma`.
    pub fn sqrt_sigma(&self) -> &Matrix {
        &self.sqrt_sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn autoregressive_entries_by_hand() {
        let spec = CorrelationSpec {
            kind: CorrelationKind::Autoregressive(0.5),
            p: 4,
        };
        let r = gen_correlation(&spec).unwrap();
        assert_eq!(r.get(0, 1), 0.5);
        assert_eq!(r.get(0, 2), 0.25);
        for j in 0..4 {
            assert_eq!(r.get(j, j), 1.0);
        }
        // Coefficient outside (0, 1) is rejected.
        let bad = CorrelationSpec {
            kind: CorrelationKind::Autoregressive(1.0),
            p: 4,
        };
        assert!(gen_correlation(&bad).is_err());
    }

    #[test]
    fn algebraic_decay_entries_by_hand() {
        let spec = CorrelationSpec {
            kind: CorrelationKind::AlgebraicDecay,
            p: 5,
        };
        let r = gen_correlation(&spec).unwrap();
        // |i - j| = 2 gives 1 / (4 * 4) = 1/16.
        assert_eq!(r.get(0, 2), 1.0 / 16.0);
        assert_eq!(r.get(1, 0), 0.25);
        for j in 0..5 {
            assert_eq!(r.get(j, j), 1.0);
        }
    }

    #[test]
    fn covariance_combines_decay_and_correlation() {
        let model = CovarianceModel::variance_decay(CorrelationSpec {
            kind: CorrelationKind::Autoregressive(0.5),
            p: 3,
        })
        .unwrap();
        // Sigma_12 = 1 * 2^{-1/2} * 0.5.
        let expect = 0.5 / 2f64.sqrt();
        assert!((model.sigma().get(0, 1) - expect).abs() < 1e-15);
        assert!((model.sigma().get(0, 0) - 1.0).abs() < 1e-15);
        assert!((model.sigma().get(2, 2) - 1.0 / 3.0).abs() < 1e-15);
        // The cached root actually squares back to Sigma.
        let s = model.sqrt_sigma();
        let ss = s.matmul(s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((ss.get(i, j) - model.sigma().get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn explicit_correlation_must_have_unit_diagonal() {
        let ok = Matrix::from_rows(&[vec![1.0, 0.3], vec![0.3, 1.0]]).unwrap();
        let spec = CorrelationSpec {
            kind: CorrelationKind::Explicit(ok.clone()),
            p: 2,
        };
        assert_eq!(gen_correlation(&spec).unwrap(), ok);

        let bad = Matrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap();
        let spec = CorrelationSpec {
            kind: CorrelationKind::Explicit(bad),
            p: 2,
        };
        assert!(gen_correlation(&spec).is_err());
    }
}
