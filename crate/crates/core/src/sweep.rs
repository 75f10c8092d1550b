//! Parameter sweeps: one simulation per value of a single `section.key`.

use crate::analysis::{summarize, TraceStats};
use crate::config::{parse_value, set_param, ConfigError, RunConfig};
use crate::par::{self, Execution};
use crate::sim::{run_simulation, SimError, SimResult};

#[derive(Debug)]
pub struct SweepPoint {
    pub value: String,
    pub config: RunConfig,
    pub outcome: Result<SweepRun, SimError>,
}

#[derive(Debug)]
pub struct SweepRun {
    pub result: SimResult,
    pub stats: Option<TraceStats>,
}

/// Builds one validated config per value. Fails on the first invalid value.
pub fn sweep_configs(
    base: &toml::Table,
    param: &str,
    values: &[String],
) -> Result<Vec<RunConfig>, ConfigError> {
    if values.is_empty() {
        return Err(ConfigError::Invalid(
            "sweep needs at least one value".into(),
        ));
    }
    values
        .iter()
        .map(|raw| {
            let mut table = base.clone();
            set_param(&mut table, param, parse_value(raw))?;
            RunConfig::from_table(table)
                .map_err(|e| ConfigError::Invalid(format!("{param} = {raw}: {e}")))
        })
        .collect()
}

pub fn run_one(cfg: &RunConfig) -> Result<SweepRun, SimError> {
    let result = run_simulation(&cfg.sim_config())?;
    let window = cfg.window().or_else(|| result.measured_window());
    let stats = summarize(&result.trace, window).ok().map(|(s, _)| s);
    Ok(SweepRun { result, stats })
}

/// Runs every configuration; output order follows `values`.
pub fn run_sweep(
    base: &toml::Table,
    param: &str,
    values: &[String],
    exec: Execution,
) -> Result<Vec<SweepPoint>, ConfigError> {
    let configs = sweep_configs(base, param, values)?;
    let outcomes = par::map(&configs, exec, run_one);
    Ok(values
        .iter()
        .zip(configs)
        .zip(outcomes)
        .map(|((value, config), outcome)| SweepPoint {
            value: value.clone(),
            config,
            outcome,
        })
        .collect())
}

pub const SWEEP_HEADER: &str =
    "value,steady_state_force_error,max,min,mean,std,skew,kurt,freq,status";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV row per sweep point; failed runs leave numeric fields empty.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in points {
        let row = match &p.outcome {
            Ok(run) => {
                let s = run.stats;
                format!(
                    "{},{},{},{},{},{},{},{},{},ok",
                    p.value,
                    opt(run.result.steady_state_force_error),
                    opt(s.map(|s| s.max)),
                    opt(s.map(|s| s.min)),
                    opt(s.map(|s| s.mean)),
                    opt(s.map(|s| s.std)),
                    opt(s.and_then(|s| s.skew)),
                    opt(s.and_then(|s| s.kurt)),
                    opt(s.and_then(|s| s.freq)),
                )
            }
            Err(_) => format!("{},,,,,,,,,unstable", p.value),
        };
        out.push_str(&row);
        out.push('\n');
    }
    out
}
