//! Batch command-line front end.
//!
//! Subcommands: `fit` (regress logistic constants from a sample CSV),
//! `point` (one operating point), `sweep-rate` (secondary rate versus the
//! primary rate floor), `sweep-power` (versus secondary transmit power),
//! and `selftest` (solver-versus-oracle and similarity round-trip checks).
//!
//! Configs are flat `key = value` text with `#` comments; any key left out
//! takes the default two-user scenario value, unknown keys are an error.
//! Results go out as CSV with a fixed header and 9 significant digits —
//! the CSV is the data of record, the optional SVG chart is a convenience.
//!
//! Exit codes: 0 ok, 1 usage, 2 validation, 3 all results infeasible,
//! 4 selftest failure.

use crate::engine::{run_point, run_sweep, PointResult, SweepAxis, SweepSpec};
use crate::noma::{ScenarioConfig, SnrUnit};
use crate::policy::{enumerate_optimal, solve_scheme, SchemeKind};
use crate::rate::decibel_to_linear;
use crate::similarity::{eval_epsilon, fit_logistic, invert_epsilon, parse_samples, FitResult};
use clap::{Parser, Subcommand};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("validation: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "semnoma",
    version,
    about = "Semantic/bit coexistence simulator for two-user uplink NOMA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the logistic similarity constants to an (snr, epsilon) sample CSV
    Fit {
        /// Scenario config (supplies the symbols-per-word count)
        #[arg(long)]
        config: PathBuf,
        /// Sample CSV with header `snr_linear,epsilon`
        #[arg(long)]
        samples: PathBuf,
        /// Write the fitted constants as CSV here as well as to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate one (scheme, rate floor) operating point
    Point {
        #[arg(long)]
        config: PathBuf,
        /// Secondary access scheme
        #[arg(long, default_value = "opportunistic")]
        scheme: SchemeKind,
        /// Primary ergodic rate floor, bits/s/Hz
        #[arg(long, default_value_t = 2.0)]
        r_min: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Monte Carlo realizations
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (results do not depend on this)
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Sweep the primary rate floor over 0..=6 bits/s/Hz for all schemes
    SweepRate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG line chart next to the CSV
        #[arg(long)]
        plot: bool,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Sweep the secondary transmit power over 0.1..=2 W for all schemes
    SweepPower {
        #[arg(long)]
        config: PathBuf,
        /// Primary ergodic rate floor held at every grid point
        #[arg(long, default_value_t = 2.0)]
        r_min: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: bool,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Run internal consistency checks (solver vs oracle, curve inversion)
    Selftest {
        #[arg(long)]
        config: PathBuf,
    },
}

const RATE_GRID: [f64; 7] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
const POWER_GRID: [f64; 6] = [0.1, 0.25, 0.5, 1.0, 1.5, 2.0];

/// Execute a parsed command, returning the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Fit {
            config,
            samples,
            out,
        } => {
            let cfg = load_config(&config)?;
            let text = read_file(&samples)?;
            let parsed = parse_samples(&text).map_err(|e| CliError::Validation(e.to_string()))?;
            let fit = fit_logistic(&parsed, cfg.logistic.k_symbols)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let rendered = render_fit(&fit);
            print!("{rendered}");
            if let Some(path) = out {
                write_file(&path, &rendered)?;
            }
            Ok(EXIT_OK)
        }
        Command::Point {
            config,
            scheme,
            r_min,
            seed,
            n,
            out,
            threads,
        } => {
            set_threads(threads);
            let cfg = load_config(&config)?;
            let point = run_point(&cfg, scheme, r_min, n, seed)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let rows = vec![point];
            print!("{}", render_results(&rows));
            if let Some(path) = out {
                write_results(&rows, &path)?;
            }
            Ok(exit_for(&rows))
        }
        Command::SweepRate {
            config,
            seed,
            n,
            out,
            plot,
            threads,
        } => {
            set_threads(threads);
            let cfg = load_config(&config)?;
            let spec = SweepSpec {
                axis: SweepAxis::RMin,
                grid: RATE_GRID.to_vec(),
                schemes: SchemeKind::ALL.to_vec(),
                realizations: n,
                master_seed: seed,
                r_min: 0.0,
            };
            let rows = run_sweep(&cfg, &spec).map_err(|e| CliError::Validation(e.to_string()))?;
            emit(
                &rows,
                out.as_deref(),
                plot,
                "minimum primary rate (bits/s/Hz)",
            )?;
            Ok(exit_for(&rows))
        }
        Command::SweepPower {
            config,
            r_min,
            seed,
            n,
            out,
            plot,
            threads,
        } => {
            set_threads(threads);
            let cfg = load_config(&config)?;
            let spec = SweepSpec {
                axis: SweepAxis::P0,
                grid: POWER_GRID.to_vec(),
                schemes: SchemeKind::ALL.to_vec(),
                realizations: n,
                master_seed: seed,
                r_min,
            };
            let rows = run_sweep(&cfg, &spec).map_err(|e| CliError::Validation(e.to_string()))?;
            emit(&rows, out.as_deref(), plot, "secondary transmit power (W)")?;
            Ok(exit_for(&rows))
        }
        Command::Selftest { config } => {
            let cfg = load_config(&config)?;
            Ok(if selftest(&cfg) {
                EXIT_OK
            } else {
                EXIT_SELFTEST
            })
        }
    }
}

fn emit(
    rows: &[PointResult],
    out: Option<&Path>,
    plot: bool,
    axis_label: &str,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_results(rows, path)?;
            if plot {
                let svg_path = path.with_extension("svg");
                write_file(&svg_path, &render_svg(rows, axis_label))?;
            }
        }
        None => {
            if plot {
                return Err(CliError::Validation("--plot requires --out".into()));
            }
            print!("{}", render_results(rows));
        }
    }
    Ok(())
}

fn exit_for(rows: &[PointResult]) -> i32 {
    if rows.iter().all(|r| !r.feasible) {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    }
}

fn set_threads(threads: Option<u16>) {
    if let Some(t) = threads {
        // The global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global();
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Config format
// ---------------------------------------------------------------------------

const CONFIG_KEYS: [&str; 20] = [
    "primary_distance_m",
    "secondary_distance_m",
    "ref_pathloss_db",
    "pathloss_exp",
    "primary_power_w",
    "p0",
    "noise_dbm",
    "noise_w",
    "info_per_msg",
    "words_per_msg",
    "bits_per_word",
    "eps_c",
    "a_low",
    "a_high",
    "growth",
    "shift",
    "k_symbols",
    "similarity_threshold",
    "bandwidth_hz",
    "snr_unit_mode",
];

/// Load a scenario config file, falling back to the default two-user
/// scenario for every key not present.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = read_file(path)?;
    parse_config(&text, &path.display().to_string())
}

/// Parse the flat `key = value` config format.
pub fn parse_config(text: &str, origin: &str) -> Result<ScenarioConfig, CliError> {
    let parse_err = |line: usize, msg: String| CliError::Parse {
        path: origin.to_string(),
        line,
        msg,
    };
    let mut cfg = ScenarioConfig::default();
    let mut noise_dbm: Option<f64> = None;
    let mut noise_w: Option<f64> = None;
    let mut seen: BTreeSet<String> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !CONFIG_KEYS.contains(&key) {
            return Err(parse_err(line_no, format!("unknown key '{key}'")));
        }
        if !seen.insert(key.to_string()) {
            return Err(parse_err(line_no, format!("duplicate key '{key}'")));
        }
        if key == "snr_unit_mode" {
            cfg.snr_unit_mode = match value {
                "linear" => SnrUnit::Linear,
                "db" => SnrUnit::Db,
                other => {
                    return Err(parse_err(
                        line_no,
                        format!("snr_unit_mode must be 'linear' or 'db', got '{other}'"),
                    ))
                }
            };
            continue;
        }
        let num: f64 = value
            .parse()
            .map_err(|_| parse_err(line_no, format!("key '{key}': not a number: '{value}'")))?;
        match key {
            "primary_distance_m" => cfg.primary_link.distance = num,
            "secondary_distance_m" => cfg.secondary_link.distance = num,
            "ref_pathloss_db" => {
                cfg.primary_link.ref_pathloss_db = num;
                cfg.secondary_link.ref_pathloss_db = num;
            }
            "pathloss_exp" => {
                cfg.primary_link.pathloss_exp = num;
                cfg.secondary_link.pathloss_exp = num;
            }
            "primary_power_w" => cfg.primary_link.tx_power = num,
            "p0" => cfg.secondary_link.tx_power = num,
            "noise_dbm" => noise_dbm = Some(num),
            "noise_w" => noise_w = Some(num),
            "info_per_msg" => cfg.source.info_per_msg = num,
            "words_per_msg" => cfg.source.words_per_msg = num,
            "bits_per_word" => cfg.source.bits_per_word = num,
            "eps_c" => cfg.source.eps_c = num,
            "a_low" => cfg.logistic.a_low = num,
            "a_high" => cfg.logistic.a_high = num,
            "growth" => cfg.logistic.growth = num,
            "shift" => cfg.logistic.shift = num,
            "k_symbols" => cfg.logistic.k_symbols = num,
            "similarity_threshold" => cfg.similarity_threshold = num,
            "bandwidth_hz" => cfg.bandwidth.hertz = num,
            _ => unreachable!("key list covers all matches"),
        }
    }

    match (noise_dbm, noise_w) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(
                "set either noise_dbm or noise_w, not both".into(),
            ))
        }
        (Some(dbm), None) => cfg.noise_power = decibel_to_linear(dbm) * 1e-3,
        (None, Some(w)) => cfg.noise_power = w,
        (None, None) => {}
    }

    cfg.validate()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(cfg)
}

/// Serialize a config so that parsing it reproduces the identical scenario.
pub fn config_to_string(cfg: &ScenarioConfig) -> String {
    let unit = match cfg.snr_unit_mode {
        SnrUnit::Linear => "linear",
        SnrUnit::Db => "db",
    };
    format!(
        "# two-user uplink NOMA scenario\n\
         primary_distance_m = {:?}\n\
         secondary_distance_m = {:?}\n\
         ref_pathloss_db = {:?}\n\
         pathloss_exp = {:?}\n\
         primary_power_w = {:?}\n\
         p0 = {:?}\n\
         noise_w = {:?}\n\
         info_per_msg = {:?}\n\
         words_per_msg = {:?}\n\
         bits_per_word = {:?}\n\
         eps_c = {:?}\n\
         a_low = {:?}\n\
         a_high = {:?}\n\
         growth = {:?}\n\
         shift = {:?}\n\
         k_symbols = {:?}\n\
         similarity_threshold = {:?}\n\
         bandwidth_hz = {:?}\n\
         snr_unit_mode = {unit}\n",
        cfg.primary_link.distance,
        cfg.secondary_link.distance,
        cfg.primary_link.ref_pathloss_db,
        cfg.primary_link.pathloss_exp,
        cfg.primary_link.tx_power,
        cfg.secondary_link.tx_power,
        cfg.noise_power,
        cfg.source.info_per_msg,
        cfg.source.words_per_msg,
        cfg.source.bits_per_word,
        cfg.source.eps_c,
        cfg.logistic.a_low,
        cfg.logistic.a_high,
        cfg.logistic.growth,
        cfg.logistic.shift,
        cfg.logistic.k_symbols,
        cfg.similarity_threshold,
        cfg.bandwidth.hertz,
    )
}

// ---------------------------------------------------------------------------
// Result emission
// ---------------------------------------------------------------------------

pub const CSV_HEADER: &str =
    "axis,scheme,ergodic_secondary_suts_per_s_hz,ergodic_primary_bits_per_s_hz,ci95,feasible";

fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Render sweep rows as the canonical CSV (9 significant digits, LF line
/// endings, rows in sweep order).
pub fn render_results(rows: &[PointResult]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            sig9(r.axis_value),
            r.scheme,
            sig9(r.ergodic_secondary),
            sig9(r.ergodic_primary),
            sig9(r.ci_halfwidth),
            r.feasible
        );
    }
    out
}

/// Write the canonical CSV to a file.
pub fn write_results(rows: &[PointResult], out_path: &Path) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::Validation("no result rows to write".into()));
    }
    write_file(out_path, &render_results(rows))
}

fn render_fit(fit: &FitResult) -> String {
    format!(
        "a_low,a_high,growth,shift,k_symbols,mse\n{},{},{},{},{},{}\n",
        sig9(fit.params.a_low),
        sig9(fit.params.a_high),
        sig9(fit.params.growth),
        sig9(fit.params.shift),
        sig9(fit.params.k_symbols),
        sig9(fit.mse)
    )
}

const SVG_COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

/// Companion line chart: secondary ergodic rate versus the sweep axis, one
/// polyline per scheme. The CSV stays authoritative; this is a quick look.
pub fn render_svg(rows: &[PointResult], axis_label: &str) -> String {
    let (w, h) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 20.0, 50.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);

    let mut schemes: Vec<SchemeKind> = Vec::new();
    for r in rows {
        if !schemes.contains(&r.scheme) {
            schemes.push(r.scheme);
        }
    }
    let x_min = rows
        .iter()
        .map(|r| r.axis_value)
        .fold(f64::INFINITY, f64::min);
    let x_max = rows
        .iter()
        .map(|r| r.axis_value)
        .fold(f64::NEG_INFINITY, f64::max);
    let y_max = rows
        .iter()
        .map(|r| r.ergodic_secondary)
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let x_span = (x_max - x_min).max(1e-12);

    let px = |x: f64| ml + (x - x_min) / x_span * pw;
    let py = |y: f64| mt + (1.0 - y / (y_max * 1.05)) * ph;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    );
    // axes
    let _ = write!(
        svg,
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr,
        h - mb,
        h - mb
    );
    for i in 0..=4 {
        let fx = x_min + x_span * i as f64 / 4.0;
        let fy = y_max * 1.05 * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{:.3}</text>",
            px(fx),
            h - mb + 16.0,
            fx
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{:.4}</text>",
            ml - 6.0,
            py(fy) + 4.0,
            fy
        );
    }
    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{axis_label}</text>\n\
         <text x=\"14\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {:.1})\">ergodic secondary rate (suts/s/Hz)</text>\n",
        ml + pw / 2.0,
        h - 12.0,
        mt + ph / 2.0,
        mt + ph / 2.0
    );
    for (si, scheme) in schemes.iter().enumerate() {
        let color = SVG_COLORS[si % SVG_COLORS.len()];
        let pts: Vec<String> = rows
            .iter()
            .filter(|r| r.scheme == *scheme)
            .map(|r| format!("{:.2},{:.2}", px(r.axis_value), py(r.ergodic_secondary)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            pts.join(" ")
        );
        let ly = mt + 16.0 + 16.0 * si as f64;
        let _ = write!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" \
             stroke-width=\"1.5\"/>\n<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{scheme}</text>\n",
            w - mr - 130.0,
            w - mr - 104.0,
            w - mr - 98.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

// ---------------------------------------------------------------------------
// Selftest
// ---------------------------------------------------------------------------

/// Solver-versus-oracle comparison and similarity round trips. Prints one
/// line per check group; returns overall success.
pub fn selftest(cfg: &ScenarioConfig) -> bool {
    let mut all_ok = true;

    // Closed-form inversion round trips on the configured curve.
    let mut ok = true;
    for i in 0..=80 {
        let snr = i as f64 * 0.5;
        let eps = eval_epsilon(&cfg.logistic, snr);
        match invert_epsilon(&cfg.logistic, eps) {
            Ok(back) if (back - snr).abs() < 1e-6 => {}
            _ => {
                ok = false;
                break;
            }
        }
    }
    if let Ok(gate) = invert_epsilon(&cfg.logistic, cfg.similarity_threshold) {
        let back = eval_epsilon(&cfg.logistic, gate);
        if (back - cfg.similarity_threshold).abs() > 1e-9 {
            ok = false;
        }
    }
    println!(
        "selftest similarity-round-trip: {}",
        if ok { "ok" } else { "FAIL" }
    );
    all_ok &= ok;

    // Lagrangian solve against the exhaustive oracle on small instances.
    let mut ok = true;
    'outer: for seed in 0..20u64 {
        let mut stream = crate::engine::derive_substream(0x5E1F, seed);
        let outcomes: Vec<_> = (0..8)
            .map(|_| crate::noma::block_outcome(&crate::channel::sample_block(&mut stream), cfg))
            .collect();
        let n = outcomes.len() as f64;
        let mean_on = outcomes.iter().map(|o| o.rate_p_on).sum::<f64>() / n;
        let mean_off = outcomes.iter().map(|o| o.rate_p_off).sum::<f64>() / n;
        let r_min = mean_on + (0.1 + 0.8 * seed as f64 / 19.0) * (mean_off - mean_on);
        let g_max = outcomes
            .iter()
            .map(|o| o.sem_rate.max(o.bitum_rate))
            .fold(0.0f64, f64::max)
            / n;
        for scheme in SchemeKind::ALL {
            let (solved, oracle) = match (
                solve_scheme(&outcomes, scheme, r_min),
                enumerate_optimal(&outcomes, scheme, r_min),
            ) {
                (Ok(s), Ok(o)) => (s, o),
                _ => {
                    ok = false;
                    break 'outer;
                }
            };
            if solved.ergodic_secondary > oracle.ergodic_secondary + 1e-12
                || oracle.ergodic_secondary - solved.ergodic_secondary > g_max
                || solved.ergodic_primary < r_min - 1e-9
            {
                ok = false;
                break 'outer;
            }
        }
    }
    println!(
        "selftest solver-vs-oracle: {}",
        if ok { "ok" } else { "FAIL" }
    );
    all_ok &= ok;

    all_ok
}
