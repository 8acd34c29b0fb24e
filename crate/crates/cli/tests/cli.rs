//! End-to-end tests of the `maxband` binary: every subcommand runs, the
//! reports land where asked, and fixed seeds give byte-identical output
//! regardless of thread count.

use std::fmt::Write as _;
use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_maxband");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("binary launches")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn small_simulate_config() -> &'static str {
    "n_total = 60\n\
     m_n = 20\n\
     ell_n = 4\n\
     p = 5\n\
     trials = 6\n\
     bootstrap_samples = 40\n\
     alphas = [0.1]\n\
     seed = 5\n"
}

#[test]
fn simulate_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    fs::write(&config_path, small_simulate_config()).unwrap();
    let config = config_path.to_str().unwrap();

    let mut texts = Vec::new();
    for (sub, threads) in [("a", "1"), ("b", "2"), ("c", "4")] {
        let out_dir = dir.path().join(sub);
        let out = run(&[
            "--config",
            config,
            "--out",
            out_dir.to_str().unwrap(),
            "--threads",
            threads,
            "simulate",
        ]);
        assert_success(&out);
        texts.push(fs::read_to_string(out_dir.join("coverage.csv")).unwrap());
        // The sidecar records the command, seed, and full configuration.
        let sidecar = fs::read_to_string(out_dir.join("simulate.config.json")).unwrap();
        assert!(sidecar.contains("\"command\": \"simulate\""));
        assert!(sidecar.contains("\"seed\": 5"));
    }
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[1], texts[2]);

    let header = texts[0].lines().next().unwrap();
    assert_eq!(
        header,
        "alpha,trials,covered,coverage,mean_median_width,flagged,degenerate"
    );
    assert_eq!(texts[0].lines().count(), 2);
    assert!(texts[0].lines().nth(1).unwrap().starts_with("0.1,6,"));
}

#[test]
fn seed_flag_overrides_the_configured_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    fs::write(&config_path, small_simulate_config()).unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "--config",
        config_path.to_str().unwrap(),
        "--seed",
        "99",
        "--out",
        out_dir.to_str().unwrap(),
        "simulate",
    ]);
    assert_success(&out);
    let sidecar = fs::read_to_string(out_dir.join("simulate.config.json")).unwrap();
    assert!(sidecar.contains("\"seed\": 99"));
}

#[test]
fn ci_builds_a_band_for_a_data_csv() {
    let dir = tempfile::tempdir().unwrap();

    // 40 observations of 3 coordinates with distinct scales.
    let mut data_csv = String::from("alpha_series,beta_series,gamma_series\n");
    let mut x = 0.37f64;
    for _ in 0..40 {
        // Deterministic scramble, no dependency on an RNG.
        let mut vals = Vec::new();
        for scale in [1.0, 2.0, 0.5] {
            x = (x * 997.0 + 0.123).fract();
            vals.push(format!("{}", scale * (x - 0.5)));
        }
        writeln!(data_csv, "{}", vals.join(",")).unwrap();
    }
    let data_path = dir.path().join("data.csv");
    fs::write(&data_path, data_csv).unwrap();

    let config_path = dir.path().join("config.toml");
    fs::write(
        &config_path,
        "m_n = 10\nell_n = 2\nbootstrap_samples = 50\nseed = 8\n",
    )
    .unwrap();

    let out_dir = dir.path().join("out");
    let out = run(&[
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "ci",
        "--data",
        data_path.to_str().unwrap(),
        "--alpha",
        "0.1",
    ]);
    assert_success(&out);

    let band = fs::read_to_string(out_dir.join("band.csv")).unwrap();
    let lines: Vec<&str> = band.lines().collect();
    assert_eq!(lines[0], "coordinate,estimate,lower,upper");
    assert_eq!(lines.len(), 4);
    for (line, name) in lines[1..]
        .iter()
        .zip(["alpha_series", "beta_series", "gamma_series"])
    {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], name);
        // The estimate is the hold-out robust mean; the interval inverts
        // the main-sample statistic, so only the endpoint order is
        // guaranteed.
        let estimate: f64 = fields[1].parse().unwrap();
        let lo: f64 = fields[2].parse().unwrap();
        let hi: f64 = fields[3].parse().unwrap();
        assert!(estimate.is_finite());
        assert!(lo <= hi, "band row out of order: {line}");
    }
}

#[test]
fn test_drift_reports_one_row_per_signal_level() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    fs::write(
        &config_path,
        "seed = 4\n\
         [gbm]\n\
         n_total = 40\n\
         m_n = 10\n\
         ell_n = 2\n\
         p = 8\n\
         k_steps = 20\n\
         trials = 4\n\
         bootstrap_samples = 40\n\
         h_grid = [0.0, 0.5]\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "test-drift",
    ]);
    assert_success(&out);
    let power = fs::read_to_string(out_dir.join("power.csv")).unwrap();
    let lines: Vec<&str> = power.lines().collect();
    assert_eq!(lines[0], "h,trials,rejections,rejection_rate");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0,4,"));
    assert!(lines[2].starts_with("0.5,4,"));
}

/// Synthetic pairs file: `windows * 30 + 1` consecutive minutes of positive
/// prices with deterministic wiggle, all within one trading day.
fn pairs_csv(windows: usize) -> String {
    let mut out = String::from("timestamp,price_a,price_b\n");
    let mut x = 0.61f64;
    for i in 0..windows * 30 + 1 {
        let total = 9 * 60 + i;
        let (hour, minute) = (total / 60, total % 60);
        assert!(hour < 24, "fixture spills past midnight");
        x = (x * 997.0 + 0.123).fract();
        let pa = 100.0 * (1.0 + 0.01 * (x - 0.5));
        x = (x * 997.0 + 0.123).fract();
        let pb = 50.0 * (1.0 + 0.01 * (x - 0.5));
        writeln!(out, "2021-03-01T{hour:02}:{minute:02},{pa},{pb}").unwrap();
    }
    out
}

#[test]
fn test_pairs_screens_each_file() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = dir.path().join("acme_corp.csv");
    fs::write(&data_path, pairs_csv(16)).unwrap();

    let config_path = dir.path().join("config.toml");
    fs::write(
        &config_path,
        "seed = 21\n[pairs]\np = 6\nell_n = 2\nbootstrap_samples = 60\n",
    )
    .unwrap();

    let out_dir = dir.path().join("out");
    let out = run(&[
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "test-pairs",
        "--data",
        data_path.to_str().unwrap(),
    ]);
    assert_success(&out);

    let report = fs::read_to_string(out_dir.join("pairs.csv")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], "label,curves,n,m_n,alpha,p_value,reject");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "acme_corp");
    // 16 complete windows, alternation keeps 8.
    assert_eq!(fields[1], "8");
    let p: f64 = fields[5].parse().unwrap();
    assert!((0.0..=1.0).contains(&p));
}

#[test]
fn diagnose_emits_decay_profile_and_fidelity_probe() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    fs::write(
        &config_path,
        "n_total = 60\nm_n = 20\nell_n = 4\np = 5\nseed = 2\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "diagnose",
        "--draws",
        "60",
    ]);
    assert_success(&out);

    let decay = fs::read_to_string(out_dir.join("decay.csv")).unwrap();
    let lines: Vec<&str> = decay.lines().collect();
    assert_eq!(lines[0], "rank,sigma");
    assert_eq!(lines.len(), 6, "one row per coordinate");
    let sigmas: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(sigmas.windows(2).all(|w| w[0] >= w[1]), "sorted decreasing");

    let summary = fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "beta_hat,ks_distance,ks_draws");
    let fields: Vec<&str> = lines[1].split(',').collect();
    let beta: f64 = fields[0].parse().unwrap();
    let ks: f64 = fields[1].parse().unwrap();
    assert!(beta.is_finite());
    assert!((0.0..=1.0).contains(&ks));
    assert_eq!(fields[2], "60");
}

#[test]
fn invalid_config_fails_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    fs::write(&config_path, "ell_n = 3\nm_n = 20\n").unwrap();
    let out = run(&[
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "simulate",
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("ell_n"), "stderr was: {stderr}");
}

#[test]
fn missing_pairs_file_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "test-pairs",
        "--data",
        dir.path().join("nope.csv").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope.csv"), "stderr was: {stderr}");
}
