//! Command-line driver: runs the simulation studies, builds confidence
//! bands for data files, screens pairs price files, and emits diagnostics.
//! Every command writes CSV reports plus a JSON sidecar recording the
//! command, seed, and full configuration; with a fixed seed the report
//! bytes do not depend on the thread count.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use maxband::bootstrap::run_bootstrap;
use maxband::data::{BlockScheme, DataMatrix};
use maxband::harness::config::{load_config, ExperimentConfig};
use maxband::harness::coverage::run_coverage_experiment;
use maxband::harness::diagnostics::{ks_probe, variance_decay_probe};
use maxband::harness::pairs::{ingest_pairs_csv, run_pairs_screen};
use maxband::harness::power::run_power_curve;
use maxband::harness::report;
use maxband::inference::simultaneous_cis;
use maxband::rng::RngStream;
use maxband::stats::fit_estimates;

#[derive(Parser)]
#[command(
    name = "maxband",
    version,
    about = "Robust simultaneous inference for high-dimensional heavy-tailed means"
)]
struct Cli {
    /// TOML configuration file; every field has a default when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed, overriding the configured one.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Directory for report files, created if missing.
    #[arg(long, global = true, value_name = "PATH", default_value = "reports")]
    out: PathBuf,

    /// Worker threads; reports are byte-identical for any choice.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coverage study: simultaneous intervals on synthetic heavy-tailed data.
    Simulate,
    /// Simultaneous confidence band for the columns of a data CSV.
    Ci {
        /// CSV with a header of coordinate names and one observation per row.
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
        /// Band level; defaults to the first configured level.
        #[arg(long, value_name = "ALPHA")]
        alpha: Option<f64>,
    },
    /// Drift-test rejection rates across simulated diffusion paths.
    TestDrift,
    /// Mean-constancy screen over pairs price files.
    TestPairs {
        /// One or more CSVs with header `timestamp,price_a,price_b`.
        #[arg(long, value_name = "PATH", num_args = 1.., required = true)]
        data: Vec<PathBuf>,
    },
    /// Variance-decay profile and a bootstrap-fidelity probe.
    Diagnose {
        /// Draws per side of the fidelity probe.
        #[arg(long, default_value_t = 2000)]
        draws: usize,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();

    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }

    let mut config = match &cli.config {
        Some(path) => {
            load_config(path).with_context(|| format!("loading config {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;

    fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;

    match &cli.command {
        Command::Simulate => simulate(&config, &cli.out),
        Command::Ci { data, alpha } => ci(&config, &cli.out, data, *alpha),
        Command::TestDrift => test_drift(&config, &cli.out),
        Command::TestPairs { data } => test_pairs(&config, &cli.out, data),
        Command::Diagnose { draws } => diagnose(&config, &cli.out, *draws),
    }
}

fn write_report(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    report::write_text(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn write_sidecar(dir: &Path, command: &str, config: &ExperimentConfig) -> Result<()> {
    let text = report::sidecar_json(command, config.seed, config)?;
    write_report(dir, &format!("{command}.config.json"), &text)?;
    Ok(())
}

fn simulate(config: &ExperimentConfig, out: &Path) -> Result<()> {
    let result = run_coverage_experiment(config)?;
    let path = write_report(out, "coverage.csv", &report::coverage_csv(&result))?;
    write_sidecar(out, "simulate", config)?;
    for row in &result.rows {
        println!(
            "alpha {:>5}: coverage {:.3} ({}/{}), mean median width {:.4}, flagged {}, degenerate {}",
            row.alpha, row.coverage, row.covered, row.trials, row.mean_median_width,
            row.flagged, row.degenerate
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// Reads a generic data CSV: header of coordinate names, one observation
/// per row, decimal reals.
fn read_data_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let names: Vec<String> = reader
        .headers()
        .context("reading header")?
        .iter()
        .map(str::to_owned)
        .collect();
    if names.is_empty() {
        bail!("{}: header names no coordinates", path.display());
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("record {}", idx + 1))?;
        if record.len() != names.len() {
            bail!(
                "{}: record {} has {} fields, expected {}",
                path.display(),
                idx + 1,
                record.len(),
                names.len()
            );
        }
        let row: Vec<f64> = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .with_context(|| format!("record {}: bad number {f:?}", idx + 1))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok((names, rows))
}

fn ci(config: &ExperimentConfig, out: &Path, data_path: &Path, alpha: Option<f64>) -> Result<()> {
    let alpha = alpha.unwrap_or(config.alphas[0]);
    let (names, rows) = read_data_csv(data_path)?;
    let data = DataMatrix::from_rows(&rows, config.m_n)?;
    let scheme = BlockScheme::new(config.ell_n, config.m_n)?;
    let est = fit_estimates(&data, &scheme, config.tau)?;
    let boot = run_bootstrap(
        &data,
        &est,
        config.bootstrap_samples,
        RngStream::new(config.seed).child(0).seed(),
    )?;
    let band = simultaneous_cis(&data, &est, &boot, alpha)?;

    let unbounded = band.intervals.iter().filter(|iv| !iv.is_bounded()).count();
    let path = write_report(
        out,
        "band.csv",
        &report::band_csv(&names, est.means(), &band),
    )?;
    write_sidecar(out, "ci", config)?;
    println!(
        "level {}: {} coordinates, quantiles [{:.4}, {:.4}], {} unbounded or empty",
        alpha,
        names.len(),
        band.q_minus,
        band.q_plus,
        unbounded
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn test_drift(config: &ExperimentConfig, out: &Path) -> Result<()> {
    let points = run_power_curve(config)?;
    let path = write_report(out, "power.csv", &report::power_csv(&points))?;
    write_sidecar(out, "test-drift", config)?;
    for pt in &points {
        println!(
            "h {:>5}: rejected {}/{} ({:.3})",
            pt.h, pt.rejections, pt.trials, pt.rejection_rate
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn test_pairs(config: &ExperimentConfig, out: &Path, files: &[PathBuf]) -> Result<()> {
    let master = RngStream::new(config.seed);
    let mut outcomes = Vec::with_capacity(files.len());
    for (idx, file) in files.iter().enumerate() {
        let label = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        let (curves, summary) =
            ingest_pairs_csv(file).with_context(|| format!("ingesting {}", file.display()))?;
        println!(
            "{label}: {} records, {} runs, {} complete windows, {} retained curves",
            summary.records, summary.runs, summary.complete_windows, summary.retained
        );
        let outcome = run_pairs_screen(
            &curves,
            &config.pairs,
            master.child(idx as u64).seed(),
            &label,
        )
        .with_context(|| format!("screening {label}"))?;
        println!(
            "{label}: n {} (hold-out {}), p-value {:.4}, reject: {}",
            outcome.n, outcome.m_n, outcome.p_value, outcome.reject
        );
        outcomes.push(outcome);
    }
    let path = write_report(out, "pairs.csv", &report::pairs_csv(&outcomes))?;
    write_sidecar(out, "test-pairs", config)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn diagnose(config: &ExperimentConfig, out: &Path, draws: usize) -> Result<()> {
    let master = RngStream::new(config.seed);
    let (sigmas, beta_hat) = variance_decay_probe(config, master.child(0).seed())?;
    let probe = ks_probe(config, draws, master.child(1).seed())?;

    let decay_path = write_report(out, "decay.csv", &report::decay_csv(&sigmas))?;
    let summary = format!(
        "beta_hat,ks_distance,ks_draws\n{beta_hat},{},{}\n",
        probe.distance, probe.draws
    );
    let summary_path = write_report(out, "diagnostics.csv", &summary)?;
    write_sidecar(out, "diagnose", config)?;
    println!("decay exponent estimate: {beta_hat:.4}");
    println!(
        "Kolmogorov distance, Monte Carlo vs bootstrap max statistic ({} draws): {:.4}",
        probe.draws, probe.distance
    );
    println!(
        "wrote {} and {}",
        decay_path.display(),
        summary_path.display()
    );
    Ok(())
}
