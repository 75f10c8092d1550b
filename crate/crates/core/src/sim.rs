//! Fixed-step closed loop: generator → admittance → skin → force feedback.
//!
//! Force feedback reaches the controller one tick late: the contact force
//! recorded at tick `i` is computed from tick `i`'s command and drives the
//! controller at tick `i + 1`.

use serde::Serialize;
use thiserror::Error;

use crate::admittance::{
    self, AdmittanceError, AdmittanceParams, AdmittanceState, ReferenceKinematics,
};
use crate::contact::SkinModel;
use crate::techniques::{
    beat_arm_command, press_command, push_command, vibrate_command, Mode, Technique, TechniqueKind,
    TickCommand,
};
use crate::types::{ForceSample, ForceTrace, Pose};

/// Contact forces above this are treated as a blown-up simulation, N.
pub const FORCE_LIMIT: f64 = 1000.0;

/// Settling window for constant-force regulation runs, s.
pub const REGULATION_WINDOW: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{section}.{constraint} violated")]
    InvalidConfig {
        section: &'static str,
        constraint: String,
    },
    #[error("unstable simulation at tick {tick} (t = {t:.4} s): {reason}")]
    Unstable { tick: usize, t: f64, reason: String },
}

impl SimError {
    fn unstable(tick: usize, t: f64, reason: impl Into<String>) -> Self {
        Self::Unstable {
            tick,
            t,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub technique: Technique,
    pub admittance: AdmittanceParams,
    pub skin: SkinModel,
    /// Total simulated time, s.
    pub duration: f64,
    /// Reserved for stochastic extensions; the loop does not read it.
    pub seed: u64,
}

impl SimConfig {
    /// Default parameters for `kind` running for `cycles` technique periods.
    pub fn with_cycles(kind: TechniqueKind, cycles: f64) -> Self {
        let technique = Technique::default_for(kind);
        Self {
            technique,
            admittance: AdmittanceParams::default(),
            skin: SkinModel::default(),
            duration: cycles * technique.cycle(),
            seed: 0,
        }
    }

    pub fn check(&self) -> Result<(), SimError> {
        let bad = |section, constraint: String| SimError::InvalidConfig {
            section,
            constraint,
        };
        self.admittance.check().map_err(|c| bad("admittance", c))?;
        self.skin.check().map_err(|c| bad("skin", c))?;
        self.technique
            .check()
            .map_err(|c| bad(self.technique.kind().name(), c))?;
        let min = 2.0 * self.technique.cycle();
        if !(self.duration.is_finite() && self.duration >= min) {
            return Err(bad(
                "sim",
                format!("duration_s ≥ {min:.4} (two technique cycles)"),
            ));
        }
        if self.duration / self.admittance.period < 2.0 {
            return Err(bad("sim", "duration_s ≥ 2 · admittance.period_s".into()));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        (self.duration / self.admittance.period).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub technique: Option<TechniqueKind>,
    pub trace: ForceTrace,
    /// Vibrate only: time the contact force first reached the threshold.
    pub activation_time: Option<f64>,
    /// Force-tracking modes: mean |f_e − f_d| over the final cycle.
    pub steady_state_force_error: Option<f64>,
    /// Contact onsets across all effectors (beat).
    pub strike_times: Vec<f64>,
    /// Start of the measured window; earlier samples are start-up transient.
    pub warmup: f64,
}

impl SimResult {
    /// `[warm-up end, last sample]`; `None` when the technique never reached
    /// its steady rhythm (vibrate without activation).
    pub fn measured_window(&self) -> Option<(f64, f64)> {
        let end = self.trace.samples.last()?.t;
        (self.warmup.is_finite() && self.warmup < end).then_some((self.warmup, end))
    }

    /// Strike events per second inside the measured window.
    pub fn strike_rate(&self) -> Option<f64> {
        let (t0, t1) = self.measured_window()?;
        let n = self
            .strike_times
            .iter()
            .filter(|&&t| t >= t0 && t <= t1)
            .count();
        Some(n as f64 / (t1 - t0))
    }

    pub fn summary(&self) -> RunSummary {
        RunSummary {
            technique: self.technique.map(|k| k.name().to_string()),
            duration_s: self.trace.samples.len() as f64 / self.trace.sample_rate,
            sample_rate_hz: self.trace.sample_rate,
            activation_time_s: self.activation_time,
            steady_state_force_error_n: self.steady_state_force_error,
            window_s: self.measured_window().map(|(a, b)| [a, b]),
        }
    }
}

/// One-line JSON run summary.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RunSummary {
    pub technique: Option<String>,
    pub duration_s: f64,
    pub sample_rate_hz: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub activation_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub steady_state_force_error_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window_s: Option<[f64; 2]>,
}

/// Command source driving the loop.
#[derive(Debug, Clone, Copy)]
enum Source {
    Technique(Technique),
    /// Constant desired force against a static reference.
    Hold {
        f_d: f64,
    },
}

/// Runs one technique simulation.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimResult, SimError> {
    cfg.check()?;
    run_loop(
        Source::Technique(cfg.technique),
        &cfg.admittance,
        &cfg.skin,
        cfg.duration,
    )
}

/// Regulates a constant force `f_d` against a static reference starting at
/// the undeformed surface. The steady-state error is taken over the final
/// [`REGULATION_WINDOW`].
pub fn run_constant_force(
    admittance: &AdmittanceParams,
    skin: &SkinModel,
    f_d: f64,
    duration: f64,
) -> Result<SimResult, SimError> {
    let bad = |section, constraint: String| SimError::InvalidConfig {
        section,
        constraint,
    };
    admittance.check().map_err(|c| bad("admittance", c))?;
    skin.check().map_err(|c| bad("skin", c))?;
    if !(f_d.is_finite() && f_d > 0.0) {
        return Err(bad("hold", "f_d > 0".into()));
    }
    if !(duration.is_finite() && duration > REGULATION_WINDOW) {
        return Err(bad("sim", format!("duration_s > {REGULATION_WINDOW}")));
    }
    run_loop(Source::Hold { f_d }, admittance, skin, duration)
}

fn run_loop(
    source: Source,
    params: &AdmittanceParams,
    skin: &SkinModel,
    duration: f64,
) -> Result<SimResult, SimError> {
    let dt = params.period;
    let n = (duration / dt).round() as usize;

    let start_depth = match source {
        Source::Technique(Technique::Push(p)) => skin.z_surface - p.z0,
        _ => 0.0,
    };
    let (n_arms, beat) = match source {
        Source::Technique(Technique::Beat(p)) => (p.n_arms, Some(p)),
        _ => (1, None),
    };

    let mut state = AdmittanceState {
        x_c: start_depth,
        ..Default::default()
    };
    let mut f_meas = 0.0;
    let mut activated: Option<f64> = None;
    let mut in_contact = [false; 2];
    let mut strike_times = Vec::new();

    let mut samples = Vec::with_capacity(n);
    let mut poses = Vec::with_capacity(n);
    let mut desired = Vec::with_capacity(n);
    let mut force_tracking = false;

    for tick in 0..n {
        let t = tick as f64 * dt;
        let cmd = match source {
            Source::Technique(Technique::Beat(p)) => beat_arm_command(t, &p, 0),
            Source::Technique(Technique::Press(p)) => press_command(t, &p),
            Source::Technique(Technique::Push(p)) => push_command(t, &p),
            Source::Technique(Technique::Vibrate(p)) => {
                let (cmd, act) = vibrate_command(t, &p, f_meas, activated);
                activated = act;
                cmd
            }
            Source::Hold { f_d } => hold_command(f_d),
        };

        let (depth, rate) = match cmd.mode {
            Mode::ForceTracking => {
                force_tracking = true;
                let reference = ReferenceKinematics {
                    x_e: start_depth,
                    ..cmd.reference
                };
                state =
                    admittance::step(&state, &reference, cmd.f_d, f_meas, params).map_err(|e| {
                        match e {
                            AdmittanceError::NonFiniteInput(what) => {
                                SimError::unstable(tick, t, format!("non-finite {what}"))
                            }
                            other => SimError::unstable(tick, t, other.to_string()),
                        }
                    })?;
                (state.x_c, state.xd_c)
            }
            Mode::PositionDominant => (cmd.reference.x_e, cmd.reference.xd_e),
        };
        let depth = depth + cmd.approach_offset;
        let rate = rate + cmd.approach_offset_rate;
        let fz = skin.force(depth, rate);
        if !fz.is_finite() || fz.abs() > FORCE_LIMIT {
            return Err(SimError::unstable(
                tick,
                t,
                format!("contact force {fz:.3e} N"),
            ));
        }

        if let Some(p) = &beat {
            for arm in 0..n_arms {
                let f_arm = if arm == 0 {
                    fz
                } else {
                    let c = beat_arm_command(t, p, arm);
                    skin.force(c.reference.x_e, c.reference.xd_e)
                };
                let touching = f_arm > 0.0;
                if touching && !in_contact[arm as usize] {
                    strike_times.push(t);
                }
                in_contact[arm as usize] = touching;
            }
        }

        samples.push(ForceSample { t, fz, fy: 0.0 });
        poses.push(Pose {
            x: cmd.lateral.x,
            y: cmd.lateral.y,
            z: skin.z_surface - depth,
            rx: cmd.lateral.rx,
            ry: 0.0,
            rz: 0.0,
        });
        desired.push(cmd.f_d);
        f_meas = fz;
    }

    let trace = ForceTrace {
        sample_rate: 1.0 / dt,
        samples,
        poses,
    };
    let end = trace.samples.last().map_or(0.0, |s| s.t);

    let (warmup, tail) = match source {
        Source::Technique(Technique::Vibrate(p)) => (
            activated.map_or(f64::INFINITY, |ta| ta + p.cycle()),
            p.cycle(),
        ),
        Source::Technique(tech) => (tech.cycle(), tech.cycle()),
        Source::Hold { .. } => (duration - REGULATION_WINDOW, REGULATION_WINDOW),
    };

    let steady_state_force_error = force_tracking.then(|| {
        let from = end - tail;
        let (sum, count) = trace
            .samples
            .iter()
            .zip(&desired)
            .filter(|(s, _)| s.t > from - 1e-12)
            .fold((0.0, 0usize), |(sum, n), (s, fd)| {
                (sum + (s.fz - fd).abs(), n + 1)
            });
        sum / count.max(1) as f64
    });

    Ok(SimResult {
        technique: match source {
            Source::Technique(t) => Some(t.kind()),
            Source::Hold { .. } => None,
        },
        trace,
        activation_time: activated,
        steady_state_force_error,
        strike_times,
        warmup,
    })
}

fn hold_command(f_d: f64) -> TickCommand {
    TickCommand::force_tracking(f_d)
}
