//! Report emission: plot-ready CSV bodies plus a JSON sidecar that
//! captures the command, seed, and full configuration, so every number in
//! a report can be regenerated.
//!
//! All builders return complete file contents with `\n` line endings and
//! `.` decimal points, and are deterministic byte-for-byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::inference::{ConfidenceBand, Interval, TestOutcome};

use super::coverage::CoverageReport;
use super::pairs::PairsOutcome;
use super::power::PowerPoint;

/// Shortest round-trip decimal rendering; infinities print as `inf` and
/// `-inf`.
fn num(x: f64) -> String {
    format!("{x}")
}

/// Quotes a field if it contains a comma, quote, or newline.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// One row per nominal level of the coverage study.
pub fn coverage_csv(report: &CoverageReport) -> String {
    let mut out =
        String::from("alpha,trials,covered,coverage,mean_median_width,flagged,degenerate\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            num(row.alpha),
            row.trials,
            row.covered,
            num(row.coverage),
            num(row.mean_median_width),
            row.flagged,
            row.degenerate
        );
    }
    out
}

/// Signal strength versus rejection rate, one row per grid point.
pub fn power_csv(points: &[PowerPoint]) -> String {
    let mut out = String::from("h,trials,rejections,rejection_rate\n");
    for pt in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(pt.h),
            pt.trials,
            pt.rejections,
            num(pt.rejection_rate)
        );
    }
    out
}

/// One row per coordinate: point estimate and simultaneous interval.
/// Unbounded endpoints are written as `-inf` / `inf`; an empty interval
/// writes `empty` in both endpoint columns.
pub fn band_csv(names: &[String], estimates: &[f64], band: &ConfidenceBand) -> String {
    assert_eq!(names.len(), band.intervals.len());
    assert_eq!(estimates.len(), band.intervals.len());
    let mut out = String::from("coordinate,estimate,lower,upper\n");
    for ((name, est), interval) in names.iter().zip(estimates).zip(&band.intervals) {
        let (lo, hi) = match interval {
            Interval::Empty => ("empty".to_owned(), "empty".to_owned()),
            Interval::Span { lo, hi } => (num(*lo), num(*hi)),
        };
        let _ = writeln!(out, "{},{},{},{}", field(name), num(*est), lo, hi);
    }
    out
}

/// Single-row summary of a zero-mean / constancy test.
pub fn test_csv(outcome: &TestOutcome) -> String {
    let offenders = outcome
        .offenders
        .iter()
        .map(|j| j.to_string())
        .collect::<Vec<_>>()
        .join(";");
    format!(
        "max_stat,min_stat,q_minus,q_plus,alpha,p_value,reject,offenders\n{},{},{},{},{},{},{},{}\n",
        num(outcome.max_stat),
        num(outcome.min_stat),
        num(outcome.q_minus),
        num(outcome.q_plus),
        num(outcome.alpha),
        num(outcome.p_value),
        outcome.reject,
        field(&offenders)
    )
}

/// One row per screened pair.
pub fn pairs_csv(outcomes: &[PairsOutcome]) -> String {
    let mut out = String::from("label,curves,n,m_n,alpha,p_value,reject\n");
    for o in outcomes {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            field(&o.label),
            o.curves,
            o.n,
            o.m_n,
            num(o.alpha),
            num(o.p_value),
            o.reject
        );
    }
    out
}

/// Estimated scales in decreasing order, one row per rank.
pub fn decay_csv(sorted_sigmas: &[f64]) -> String {
    let mut out = String::from("rank,sigma\n");
    for (j, s) in sorted_sigmas.iter().enumerate() {
        let _ = writeln!(out, "{},{}", j + 1, num(*s));
    }
    out
}

#[derive(Serialize)]
struct Sidecar<'a, C: Serialize> {
    command: &'a str,
    seed: u64,
    config: &'a C,
}

/// Pretty-printed JSON recording how a report was produced.
pub fn sidecar_json<C: Serialize>(command: &str, seed: u64, config: &C) -> Result<String> {
    let sidecar = Sidecar {
        command,
        seed,
        config,
    };
    let mut text =
        serde_json::to_string_pretty(&sidecar).expect("report configurations serialize infallibly");
    text.push('\n');
    Ok(text)
}

/// Writes report text to disk.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}
