//! End-to-end tests of the command-line binary: exit codes, golden CSV
//! output, config handling, fit round trip, plot emission.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_semnoma")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semnoma-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("scenario.cfg");
    std::fs::write(&path, body).unwrap();
    path
}

// Frozen output of `sweep-power --n 50 --seed 1 --r-min 2` on the default
// scenario. Guards the CSV contract byte for byte: header, row order,
// 9 significant digits, LF endings.
const GOLDEN_POWER_SWEEP: &str = "\
axis,scheme,ergodic_secondary_suts_per_s_hz,ergodic_primary_bits_per_s_hz,ci95,feasible
1.00000000e-1,opportunistic,3.54438395e-2,8.45800455e0,6.15558707e-3,true
1.00000000e-1,sem-only,0.00000000e0,9.86624207e0,0.00000000e0,true
1.00000000e-1,bit-only,3.54438395e-2,8.45800455e0,6.15558707e-3,true
2.50000000e-1,opportunistic,7.25647591e-2,7.62202262e0,1.62885049e-2,true
2.50000000e-1,sem-only,3.40696557e-2,9.15250121e0,2.03680310e-2,true
2.50000000e-1,bit-only,5.66835314e-2,7.62202262e0,8.09599691e-3,true
5.00000000e-1,opportunistic,1.08717394e-1,6.87013958e0,1.94253662e-2,true
5.00000000e-1,sem-only,7.65591492e-2,8.14430303e0,2.62654101e-2,true
5.00000000e-1,bit-only,7.60112427e-2,6.87013958e0,9.27004127e-3,true
1.00000000e0,opportunistic,1.38421125e-1,6.05064944e0,1.85525109e-2,true
1.00000000e0,sem-only,1.12414237e-1,7.07501162e0,2.67951489e-2,true
1.00000000e0,bit-only,9.74585304e-2,6.05064944e0,1.01212313e-2,true
1.50000000e0,opportunistic,1.53504180e-1,5.55449723e0,1.69958641e-2,true
1.50000000e0,sem-only,1.32355578e-1,6.39246831e0,2.54308619e-2,true
1.50000000e0,bit-only,1.10724810e-1,5.55449723e0,1.04773580e-2,true
2.00000000e0,opportunistic,1.66102056e-1,5.20001603e0,1.49639533e-2,true
2.00000000e0,sem-only,1.51493614e-1,5.77578281e0,2.25464499e-2,true
2.00000000e0,bit-only,1.20377619e-1,5.20001603e0,1.06753768e-2,true
";

#[test]
fn golden_power_sweep_csv() {
    let dir = workdir("golden");
    let config = write_config(&dir, "");
    let out = dir.join("power.csv");
    let output = run(&[
        "sweep-power",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "50",
        "--seed",
        "1",
        "--r-min",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, GOLDEN_POWER_SWEEP);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn stdout_matches_file_output() {
    let dir = workdir("stdout");
    let config = write_config(&dir, "# all defaults\n");
    let output = run(&[
        "sweep-power",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "50",
        "--seed",
        "1",
        "--r-min",
        "2",
    ]);
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout), GOLDEN_POWER_SWEEP);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_error_exits_1() {
    let output = run(&["sweep-rate", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(1));
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn validation_error_exits_2() {
    let dir = workdir("validation");
    let config = write_config(&dir, "similarity_threshold = 1.5\n");
    let output = run(&["point", "--config", config.to_str().unwrap(), "--n", "10"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("similarity_threshold"), "stderr: {stderr}");

    let config = write_config(&dir, "p_zero = 1\n");
    let output = run(&["point", "--config", config.to_str().unwrap(), "--n", "10"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("p_zero") && stderr.contains(":1"),
        "stderr: {stderr}"
    );

    let output = run(&[
        "point",
        "--config",
        dir.join("missing.cfg").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn infeasible_only_results_exit_3() {
    let dir = workdir("infeasible");
    let config = write_config(&dir, "");
    let output = run(&[
        "point",
        "--config",
        config.to_str().unwrap(),
        "--r-min",
        "99",
        "--n",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(
        stdout.lines().nth(1).unwrap().ends_with(",false"),
        "stdout: {stdout}"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_passes_on_defaults() {
    let dir = workdir("selftest");
    let config = write_config(&dir, "");
    let output = run(&["selftest", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("similarity-round-trip: ok"));
    assert!(stdout.contains("solver-vs-oracle: ok"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn fit_recovers_curve_from_sample_csv() {
    let dir = workdir("fit");
    let config = write_config(&dir, "");
    // noiseless samples from the default K=5 curve
    let mut csv = String::from("snr_linear,epsilon\n");
    for i in 0..30 {
        let snr = i as f64;
        let eps = 0.37 + 0.61 / (1.0 + (-(0.2525 * snr - 0.7895)).exp());
        csv.push_str(&format!("{snr},{eps}\n"));
    }
    let samples = dir.join("samples.csv");
    std::fs::write(&samples, csv).unwrap();
    let out = dir.join("fit.csv");
    let output = run(&[
        "fit",
        "--config",
        config.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let written = std::fs::read_to_string(&out).unwrap();
    let mut lines = written.lines();
    assert_eq!(
        lines.next().unwrap(),
        "a_low,a_high,growth,shift,k_symbols,mse"
    );
    let fields: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert!((fields[0] - 0.37).abs() < 1e-5);
    assert!((fields[1] - 0.98).abs() < 1e-5);
    assert!((fields[2] - 0.2525).abs() < 1e-5);
    assert!((fields[3] + 0.7895).abs() < 1e-5);
    assert_eq!(fields[4], 5.0);
    assert!(fields[5] < 1e-10);
    // stdout carries the same report
    assert_eq!(String::from_utf8_lossy(&output.stdout), written);

    // degenerate input is a validation failure
    std::fs::write(&samples, "snr_linear,epsilon\n1,0.5\n2,0.6\n").unwrap();
    let output = run(&[
        "fit",
        "--config",
        config.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn plot_flag_writes_svg_companion() {
    let dir = workdir("plot");
    let config = write_config(&dir, "");
    let out = dir.join("rates.csv");
    let output = run(&[
        "sweep-rate",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "50",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--plot",
    ]);
    assert!(output.status.success());
    let svg = std::fs::read_to_string(dir.join("rates.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 3);

    // plot without a file target has nowhere to go
    let output = run(&[
        "sweep-rate",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "50",
        "--plot",
    ]);
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_rows_keep_opportunistic_dominance() {
    // Recheck the common-random-numbers scheme ordering on the emitted
    // file itself, through the 9-digit rounding.
    let dir = workdir("dominance");
    let config = write_config(&dir, "");
    let out = dir.join("rates.csv");
    let output = run(&[
        "sweep-rate",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "500",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut per_axis: std::collections::BTreeMap<String, Vec<(String, f64)>> =
        std::collections::BTreeMap::new();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        per_axis
            .entry(fields[0].to_string())
            .or_default()
            .push((fields[1].to_string(), fields[2].parse().unwrap()));
    }
    assert_eq!(per_axis.len(), 7);
    for (axis, schemes) in per_axis {
        let opp = schemes
            .iter()
            .find(|(s, _)| s == "opportunistic")
            .unwrap()
            .1;
        for (name, value) in &schemes {
            assert!(
                opp >= value - 1e-9,
                "axis {axis}: opportunistic {opp} < {name} {value}"
            );
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn p0_override_changes_results() {
    let dir = workdir("override");
    let base = write_config(&dir, "");
    let halved = dir.join("halved.cfg");
    std::fs::write(&halved, "p0 = 0.5\n").unwrap();
    let args = |cfg: &Path| {
        vec![
            "point".to_string(),
            "--config".into(),
            cfg.to_str().unwrap().into(),
            "--n".into(),
            "200".into(),
            "--seed".into(),
            "1".into(),
            "--r-min".into(),
            "0".into(),
        ]
    };
    let full = run(&args(&base).iter().map(String::as_str).collect::<Vec<_>>());
    let half = run(&args(&halved).iter().map(String::as_str).collect::<Vec<_>>());
    assert!(full.status.success() && half.status.success());
    assert_ne!(full.stdout, half.stdout);
    std::fs::remove_dir_all(&dir).ok();
}
