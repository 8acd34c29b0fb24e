//! Pairs-trading screen: minute-bar price CSVs in, constancy tests out.
//!
//! Input files carry two price series on a common minute grid. The stream
//! is cut into runs at any timestamp gap of more than one minute; within a
//! run, every 30 consecutive log-return differences form one curve (31
//! price records, with consecutive windows sharing a boundary record), and
//! windows are kept alternately (first, third, ...) across the whole file
//! to damp serial dependence. A window containing a missing price is
//! dropped without disturbing the partition. Retained curves live on the
//! interior grid `t_j = j/30` and feed the functional constancy test: the
//! projection skips the constant basis element, so "mean return difference
//! is constant" is the null, whatever that constant is.

use std::io::Read;
use std::path::Path;

use chrono::NaiveDateTime;

use crate::data::BlockScheme;
use crate::error::{Error, Result};
use crate::functional::{functional_zero_test, CurveSample};

use super::config::PairsConfig;

/// Log-return differences per curve; windows span one more price record.
pub const RETURNS_PER_WINDOW: usize = 30;

/// One parsed CSV record: a minute index and two optional prices.
#[derive(Debug, Clone, PartialEq)]
pub struct PairsRecord {
    /// Minutes since the Unix epoch.
    pub minute: i64,
    pub price_a: Option<f64>,
    pub price_b: Option<f64>,
}

impl PairsRecord {
    fn complete(&self) -> bool {
        self.price_a.is_some() && self.price_b.is_some()
    }
}

/// Bookkeeping from windowing, for reporting and invariant checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestSummary {
    pub records: usize,
    /// Maximal gap-free stretches of the minute grid.
    pub runs: usize,
    /// Complete 31-record windows across all runs.
    pub complete_windows: usize,
    /// Windows surviving the keep-every-other rule.
    pub kept_by_alternation: usize,
    /// Kept windows discarded for a missing price.
    pub dropped_missing: usize,
    /// Curves actually produced: kept minus dropped.
    pub retained: usize,
}

const TIMESTAMP_FORMATS: [&str; 4] = [
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M",
    "%Y-%m-%d %H:%M:%S",
];

fn parse_minute(text: &str, record: usize) -> Result<i64> {
    for format in TIMESTAMP_FORMATS {
        if let Ok(dt) = NaiveDateTime::parse_from_str(text, format) {
            return Ok(dt.and_utc().timestamp() / 60);
        }
    }
    Err(Error::Malformed {
        record,
        reason: format!("unparseable timestamp `{text}`"),
    })
}

fn parse_price(text: &str, record: usize, column: &str) -> Result<Option<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    let value: f64 = text.parse().map_err(|_| Error::Malformed {
        record,
        reason: format!("unparseable {column} `{text}`"),
    })?;
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::Malformed {
            record,
            reason: format!("{column} must be positive, got {value}"),
        });
    }
    Ok(Some(value))
}

/// Parses `timestamp,price_a,price_b` records from a reader.
///
/// Timestamps must be ISO-8601 at minute resolution and strictly
/// increasing; an empty price field means missing, and a non-positive or
/// non-numeric price is an error.
pub fn parse_pairs_reader<R: Read>(reader: R) -> Result<Vec<PairsRecord>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Malformed {
            record: 0,
            reason: e.to_string(),
        })?
        .clone();
    let expected = ["timestamp", "price_a", "price_b"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Malformed {
            record: 0,
            reason: format!(
                "header must be `timestamp,price_a,price_b`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut records = Vec::new();
    for (idx, row) in csv_reader.records().enumerate() {
        let record_no = idx + 1;
        let row = row.map_err(|e| Error::Malformed {
            record: record_no,
            reason: e.to_string(),
        })?;
        if row.len() != 3 {
            return Err(Error::Malformed {
                record: record_no,
                reason: format!("expected 3 fields, got {}", row.len()),
            });
        }
        let minute = parse_minute(&row[0], record_no)?;
        if let Some(last) = records.last() {
            let last: &PairsRecord = last;
            if minute <= last.minute {
                return Err(Error::Malformed {
                    record: record_no,
                    reason: "timestamps must be strictly increasing".to_string(),
                });
            }
        }
        records.push(PairsRecord {
            minute,
            price_a: parse_price(&row[1], record_no, "price_a")?,
            price_b: parse_price(&row[2], record_no, "price_b")?,
        });
    }
    Ok(records)
}

/// Cuts records into runs, windows each run, applies alternation, and
/// computes the retained return-difference curves.
pub fn build_return_curves(records: &[PairsRecord]) -> Result<(Vec<CurveSample>, IngestSummary)> {
    let mut runs: Vec<&[PairsRecord]> = Vec::new();
    let mut start = 0usize;
    for i in 1..records.len() {
        if records[i].minute - records[i - 1].minute > 1 {
            runs.push(&records[start..i]);
            start = i;
        }
    }
    if !records.is_empty() {
        runs.push(&records[start..]);
    }

    let mut curves = Vec::new();
    let mut summary = IngestSummary {
        records: records.len(),
        runs: runs.len(),
        complete_windows: 0,
        kept_by_alternation: 0,
        dropped_missing: 0,
        retained: 0,
    };
    let mut global_window = 0usize;
    for run in &runs {
        if run.len() < RETURNS_PER_WINDOW + 1 {
            continue;
        }
        let windows = (run.len() - 1) / RETURNS_PER_WINDOW;
        for w in 0..windows {
            summary.complete_windows += 1;
            let keep = global_window.is_multiple_of(2);
            global_window += 1;
            if !keep {
                continue;
            }
            summary.kept_by_alternation += 1;
            let span = &run[w * RETURNS_PER_WINDOW..=(w + 1) * RETURNS_PER_WINDOW];
            if span.iter().any(|r| !r.complete()) {
                summary.dropped_missing += 1;
                continue;
            }
            let mut values = Vec::with_capacity(RETURNS_PER_WINDOW);
            for j in 1..span.len() {
                let (pa0, pb0) = (span[j - 1].price_a.unwrap(), span[j - 1].price_b.unwrap());
                let (pa1, pb1) = (span[j].price_a.unwrap(), span[j].price_b.unwrap());
                values.push((pa1 / pa0).ln() - (pb1 / pb0).ln());
            }
            curves.push(CurveSample::on_interior_grid(values)?);
            summary.retained += 1;
        }
    }
    debug_assert_eq!(
        summary.retained,
        summary.kept_by_alternation - summary.dropped_missing
    );
    debug_assert_eq!(
        summary.kept_by_alternation,
        summary.complete_windows.div_ceil(2)
    );
    Ok((curves, summary))
}

/// Reads a pairs CSV and produces its retained return-difference curves.
pub fn ingest_pairs_csv(path: &Path) -> Result<(Vec<CurveSample>, IngestSummary)> {
    let file = std::fs::File::open(path)?;
    let records = parse_pairs_reader(file)?;
    build_return_curves(&records)
}

/// Screening verdict for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairsOutcome {
    pub label: String,
    /// Retained curves (main + hold-out).
    pub curves: usize,
    /// Main-sample curves used by the statistic.
    pub n: usize,
    /// Hold-out curves used for estimation.
    pub m_n: usize,
    pub alpha: f64,
    pub p_value: f64,
    pub reject: bool,
}

/// Hold-out size for `n_curves`: one block per ten blocks' worth of curves,
/// rounded down, but at least one block of length `ell_n`.
pub fn pairs_holdout_size(n_curves: usize, ell_n: usize) -> usize {
    let blocks = n_curves / (10 * ell_n);
    ell_n * blocks.max(1)
}

/// Tests whether a pair's mean return-difference curve is constant.
pub fn run_pairs_screen(
    curves: &[CurveSample],
    config: &PairsConfig,
    seed: u64,
    label: &str,
) -> Result<PairsOutcome> {
    config.validate()?;
    let m_n = pairs_holdout_size(curves.len(), config.ell_n);
    if curves.len() < m_n + 2 {
        return Err(Error::TooFewCurves {
            needed: m_n + 2,
            got: curves.len(),
        });
    }
    let scheme = BlockScheme::new(config.ell_n, m_n)?;
    let outcome = functional_zero_test(
        curves,
        config.start_index,
        config.p,
        &scheme,
        config.tau,
        config.alpha,
        config.bootstrap_samples,
        seed,
    )?;
    Ok(PairsOutcome {
        label: label.to_string(),
        curves: curves.len(),
        n: curves.len() - m_n,
        m_n,
        alpha: config.alpha,
        p_value: outcome.p_value,
        reject: outcome.reject,
    })
}
