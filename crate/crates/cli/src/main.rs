//! `masseur`: run, analyze, compare and sweep massage simulations.
//!
//! Exit codes: 0 success, 1 comparison failed, 2 usage or config error,
//! 3 unstable simulation.

use clap::{Parser, Subcommand};
use log::{info, warn};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use masseur_core::analysis::{export_spectrum, summarize, TraceStats};
use masseur_core::config::{self, RunConfig};
use masseur_core::sweep::{run_sweep, sweep_csv};
use masseur_core::{
    compare_to_reference, export_trace, read_trace, run_simulation, Execution, Reference,
    RunSummary, SimError, SimResult, TechniqueKind, Tolerances,
};

const EXIT_COMPARE_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSTABLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "masseur",
    version,
    about = "Massage-robot force-control simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one technique and write trace.csv and summary.json.
    Run {
        config: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Characterize a trace and write stats.json and spectrum.csv.
    Analyze {
        trace: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Analysis window in seconds, `t0:t1`. Defaults to the window in a
        /// sibling summary.json, else the whole trace.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
    },
    /// Compare stats.json against a reference row and write report.json.
    Compare {
        stats: PathBuf,
        #[arg(long)]
        technique: String,
        #[arg(long = "ref")]
        reference: Reference,
        /// TOML file of per-field tolerances.
        #[arg(long)]
        tol: Option<PathBuf>,
        /// Directory for report.json; defaults to the stats file's directory.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one simulation per value of `section.key`.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
        /// Run the simulations one after another.
        #[arg(long)]
        sequential: bool,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected t0:t1")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad t0 `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad t1 `{b}`"))?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err("expected finite t0 < t1".into());
    }
    Ok((a, b))
}

/// Command failure carrying its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.to_string(),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let code = match e {
            SimError::Unstable { .. } => EXIT_UNSTABLE,
            SimError::InvalidConfig { .. } => EXIT_USAGE,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MASSEUR_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, &out),
        Command::Analyze { trace, out, window } => cmd_analyze(&trace, &out, window),
        Command::Compare {
            stats,
            technique,
            reference,
            tol,
            out,
        } => cmd_compare(
            &stats,
            &technique,
            reference,
            tol.as_deref(),
            out.as_deref(),
        ),
        Command::Sweep {
            config,
            param,
            values,
            out,
            sequential,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            cmd_sweep(&config, &param, &values, &out, exec)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(Failure::usage)?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn write_run(dir: &Path, result: &SimResult) -> Result<(), Failure> {
    create_dir(dir)?;
    export_trace(result, &dir.join("trace.csv")).map_err(Failure::usage)?;
    write_json(&dir.join("summary.json"), &result.summary())
}

fn cmd_run(config_path: &Path, out: &Path) -> CmdResult {
    let cfg = RunConfig::load(config_path).map_err(Failure::usage)?;
    info!("running {} for {:.3} s", cfg.sim.technique, cfg.duration());
    let result = run_simulation(&cfg.sim_config())?;
    write_run(out, &result)?;
    info!("wrote {}", out.display());
    Ok(0)
}

#[derive(Serialize)]
struct StatsFile {
    #[serde(flatten)]
    stats: TraceStats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

/// Measured window recorded by `run` next to the trace, if any.
fn sibling_window(trace_path: &Path) -> Option<(f64, f64)> {
    let path = trace_path.parent()?.join("summary.json");
    let text = std::fs::read_to_string(&path).ok()?;
    let summary: RunSummary = serde_json::from_str(&text).ok()?;
    let [a, b] = summary.window_s?;
    info!("using window {a}:{b} from {}", path.display());
    Some((a, b))
}

fn cmd_analyze(trace_path: &Path, out: &Path, window: Option<(f64, f64)>) -> CmdResult {
    let trace = read_trace(trace_path)
        .map_err(|e| Failure::usage(format!("{}: {e}", trace_path.display())))?;
    let window = window.or_else(|| sibling_window(trace_path));
    let (stats, warnings) = summarize(&trace, window).map_err(Failure::usage)?;
    for w in &warnings {
        warn!("{w}");
    }
    create_dir(out)?;
    write_json(&out.join("stats.json"), &StatsFile { stats, warnings })?;
    export_spectrum(&trace, window, &out.join("spectrum.csv")).map_err(Failure::usage)?;
    Ok(0)
}

fn cmd_compare(
    stats_path: &Path,
    technique: &str,
    reference: Reference,
    tol: Option<&Path>,
    out: Option<&Path>,
) -> CmdResult {
    let kind: TechniqueKind = technique.parse().map_err(Failure::usage)?;
    let text = std::fs::read_to_string(stats_path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", stats_path.display())))?;
    let stats: TraceStats = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", stats_path.display())))?;
    let tolerances = match tol {
        Some(p) => {
            let text = config::read(p).map_err(Failure::usage)?;
            toml::from_str::<Tolerances>(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?
        }
        None => Tolerances::default(),
    };
    let report = compare_to_reference(&stats, kind, reference, &tolerances);
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| {
        stats_path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .to_path_buf()
    });
    create_dir(&dir)?;
    write_json(&dir.join("report.json"), &report)?;
    if report.all_pass() {
        Ok(0)
    } else {
        let failed: Vec<&str> = report.failed().collect();
        eprintln!("comparison failed: {}", failed.join(", "));
        Ok(EXIT_COMPARE_FAIL)
    }
}

/// Subdirectory name for one sweep value.
fn run_dir_name(index: usize, param: &str, value: &str) -> String {
    let clean: String = value
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{index:03}_{}_{clean}", param.replace('.', "-"))
}

fn cmd_sweep(
    config_path: &Path,
    param: &str,
    values: &[String],
    out: &Path,
    exec: Execution,
) -> CmdResult {
    let values: Vec<String> = values
        .iter()
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    if values.is_empty() {
        return Err(Failure::usage("--values needs at least one value"));
    }
    let base = config::parse_table(&config::read(config_path).map_err(Failure::usage)?)
        .map_err(Failure::usage)?;
    let points = run_sweep(&base, param, &values, exec).map_err(Failure::usage)?;
    create_dir(out)?;
    let mut unstable = 0;
    for (i, p) in points.iter().enumerate() {
        let dir = out.join(run_dir_name(i, param, &p.value));
        create_dir(&dir)?;
        std::fs::write(dir.join("config.toml"), p.config.to_toml())
            .map_err(|e| Failure::usage(format!("cannot write config: {e}")))?;
        match &p.outcome {
            Ok(run) => write_run(&dir, &run.result)?,
            Err(e) => {
                warn!("{param} = {}: {e}", p.value);
                unstable += 1;
            }
        }
    }
    std::fs::write(out.join("sweep.csv"), sweep_csv(&points))
        .map_err(|e| Failure::usage(format!("cannot write sweep.csv: {e}")))?;
    if unstable > 0 {
        eprintln!("{unstable} of {} runs were unstable", points.len());
        return Ok(EXIT_UNSTABLE);
    }
    Ok(0)
}
