//! Sample layout: the data matrix with its main/hold-out split, and the
//! block scheme used by the median-of-means estimators.
//!
//! A dataset is `n + m_n` rows of dimension `p`. The first `n` rows (the
//! main sample) enter the test statistic and the bootstrap; the last `m_n`
//! rows (the hold-out sample) are reserved for estimating centers and
//! scales, so estimation noise stays independent of the statistic.

use crate::error::{Error, Result};

/// Row-major `(n + m_n) x p` data matrix with a designated hold-out block.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    n: usize,
    m_n: usize,
    p: usize,
}

impl DataMatrix {
    /// Wraps a row-major buffer of `(n + m_n) * p` finite values.
    ///
    /// Requires `n >= 2` main rows, an even hold-out size `m_n >= 2`, and
    /// `p >= 1` coordinates.
    pub fn new(values: Vec<f64>, n: usize, m_n: usize, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("p", "dimension must be at least 1"));
        }
        if n < 2 {
            return Err(Error::invalid("n", "need at least 2 main rows"));
        }
        if m_n < 2 || !m_n.is_multiple_of(2) {
            return Err(Error::invalid(
                "m_n",
                format!("hold-out size must be even and at least 2, got {m_n}"),
            ));
        }
        let expected = (n + m_n) * p;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "DataMatrix::new",
                expected,
                actual: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "values",
                format!("non-finite entry at row {}, column {}", pos / p, pos % p),
            ));
        }
        Ok(DataMatrix { values, n, m_n, p })
    }

    /// Builds a matrix from rows, taking the last `m_n` rows as hold-out.
    pub fn from_rows(rows: &[Vec<f64>], m_n: usize) -> Result<Self> {
        let total = rows.len();
        if total <= m_n {
            return Err(Error::invalid(
                "m_n",
                format!("hold-out size {m_n} leaves no main rows out of {total}"),
            ));
        }
        let p = rows[0].len();
        let mut values = Vec::with_capacity(total * p);
        for row in rows {
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    context: "DataMatrix::from_rows",
                    expected: p,
                    actual: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        DataMatrix::new(values, total - m_n, m_n, p)
    }

    /// Number of main rows.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of hold-out rows.
    pub fn m_n(&self) -> usize {
        self.m_n
    }

    /// Dimension.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn total_rows(&self) -> usize {
        self.n + self.m_n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.p + col]
    }

    /// One full row (main rows come first, then hold-out rows).
    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.p..(row + 1) * self.p]
    }

    /// Iterates over the main-sample entries of column `j`.
    pub fn main_column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.get(i, j))
    }

    /// Copies the hold-out entries of column `j`.
    pub fn holdout_column(&self, j: usize) -> Vec<f64> {
        (self.n..self.n + self.m_n)
            .map(|i| self.get(i, j))
            .collect()
    }
}

/// Partition of the hold-out rows into `b_n` contiguous blocks of even
/// length `ell_n`, with `ell_n * b_n = m_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockScheme {
    ell_n: usize,
    b_n: usize,
}

impl BlockScheme {
    /// Builds the scheme for hold-out size `m_n` with block length `ell_n`.
    ///
    /// `ell_n` must be even and at least 2 (the variance estimator pairs
    /// entries half a block apart), and must divide `m_n` exactly.
    pub fn new(ell_n: usize, m_n: usize) -> Result<Self> {
        if ell_n < 2 || !ell_n.is_multiple_of(2) {
            return Err(Error::invalid(
                "ell_n",
                format!("block length must be even and at least 2, got {ell_n}"),
            ));
        }
        if m_n == 0 || !m_n.is_multiple_of(ell_n) {
            return Err(Error::invalid(
                "ell_n",
                format!("block length {ell_n} does not divide hold-out size {m_n}"),
            ));
        }
        Ok(BlockScheme {
            ell_n,
            b_n: m_n / ell_n,
        })
    }

    pub fn ell_n(&self) -> usize {
        self.ell_n
    }

    pub fn b_n(&self) -> usize {
        self.b_n
    }

    pub fn m_n(&self) -> usize {
        self.ell_n * self.b_n
    }
}
