//! Per-tick command generators for the four techniques.
//!
//! Beat is kinematic: two minimum-jerk movements per cycle, with the return
//! rotation corrected by a slow cosine drift term. Press, push and vibrate
//! are force specified and hand the approach axis to the admittance loop.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::admittance::ReferenceKinematics;
use crate::types::Pose;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ForceTracking,
    PositionDominant,
}

/// What a generator asks of the loop for one control tick.
///
/// For force-tracking modes `reference` carries only the reference rates;
/// the loop anchors the position at the controller's starting depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickCommand {
    pub reference: ReferenceKinematics,
    /// Technique-driven x, y and rx offsets (not under force control).
    pub lateral: Pose,
    pub lateral_vel: Pose,
    pub lateral_acc: Pose,
    /// Oscillation superimposed on the approach command after the controller.
    pub approach_offset: f64,
    pub approach_offset_rate: f64,
    pub f_d: f64,
    pub mode: Mode,
}

impl TickCommand {
    pub(crate) fn force_tracking(f_d: f64) -> Self {
        Self {
            reference: ReferenceKinematics::default(),
            lateral: Pose::default(),
            lateral_vel: Pose::default(),
            lateral_acc: Pose::default(),
            approach_offset: 0.0,
            approach_offset_rate: 0.0,
            f_d,
            mode: Mode::ForceTracking,
        }
    }
}

/// Quintic minimum-jerk blend `10τ³ − 15τ⁴ + 6τ⁵` and its first two
/// derivatives with respect to `τ`.
#[inline]
pub fn min_jerk(tau: f64) -> (f64, f64, f64) {
    let tau = tau.clamp(0.0, 1.0);
    let t2 = tau * tau;
    let t3 = t2 * tau;
    let p = t3 * (10.0 - 15.0 * tau + 6.0 * t2);
    let dp = 30.0 * t2 * (1.0 - tau) * (1.0 - tau);
    let ddp = 60.0 * tau * (1.0 - tau) * (1.0 - 2.0 * tau);
    (p, dp, ddp)
}

// ---------------------------------------------------------------- beat

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BeatParams {
    /// Rotation about X per strike, degrees.
    pub rot_x_deg: f64,
    /// X translation per strike, m.
    pub dx: f64,
    /// Stroke along the approach axis, m.
    pub dz: f64,
    /// Duration of one movement, s.
    pub stroke_duration: f64,
    pub corr_amp_deg: f64,
    /// Correction angular rate, rad/s.
    pub corr_omega: f64,
    pub corr_delta_deg: f64,
    pub n_arms: u8,
    /// Penetration at the struck pose, m.
    pub strike_depth: f64,
}

impl Default for BeatParams {
    fn default() -> Self {
        Self {
            rot_x_deg: 25.0,
            dx: 0.03,
            dz: 0.16,
            stroke_duration: 1.0,
            corr_amp_deg: 1.0,
            corr_omega: 2.0 * PI / 60.0,
            corr_delta_deg: 0.0,
            n_arms: 2,
            strike_depth: 0.03,
        }
    }
}

impl BeatParams {
    pub fn check(&self) -> Result<(), String> {
        if !(self.stroke_duration.is_finite() && self.stroke_duration > 0.0) {
            return Err("stroke_duration > 0".into());
        }
        if !(self.dz.is_finite() && self.dz > 0.0) {
            return Err("dz > 0".into());
        }
        if !matches!(self.n_arms, 1 | 2) {
            return Err("n_arms ∈ {1, 2}".into());
        }
        if !(self.strike_depth.is_finite() && self.strike_depth >= 0.0) {
            return Err("strike_depth ≥ 0".into());
        }
        for (name, v) in [
            ("rot_x_deg", self.rot_x_deg),
            ("dx", self.dx),
            ("corr_amp_deg", self.corr_amp_deg),
            ("corr_omega", self.corr_omega),
            ("corr_delta_deg", self.corr_delta_deg),
        ] {
            if !v.is_finite() {
                return Err(format!("{name} finite"));
            }
        }
        if self.rot_x_deg.abs() + self.corr_amp_deg.abs() + self.corr_delta_deg.abs() > 360.0 {
            return Err("rot_x_deg within ±360".into());
        }
        Ok(())
    }

    /// One full strike-and-return cycle of a single arm.
    pub fn cycle(&self) -> f64 {
        2.0 * self.stroke_duration
    }

    /// Approach coordinate of the raised pose.
    pub fn raised_depth(&self) -> f64 {
        self.strike_depth - self.dz
    }

    /// Return rotation of the second movement, `r_x,2 = r_x,1 + A·cos(ωt) + δ`.
    pub fn return_rotation(&self, t: f64) -> f64 {
        self.rot_x_deg + self.corr_amp_deg * (self.corr_omega * t).cos() + self.corr_delta_deg
    }
}

/// Command for the first (instrumented) arm.
pub fn beat_command(t: f64, p: &BeatParams) -> TickCommand {
    beat_arm_command(t, p, 0)
}

/// Command for arm `arm`. The second arm idles at the raised pose for one
/// stroke and then runs the first arm's cycle shifted by `stroke_duration`.
pub fn beat_arm_command(t: f64, p: &BeatParams, arm: u8) -> TickCommand {
    let sd = p.stroke_duration;
    let (local, idle) = match arm {
        0 => (t, false),
        _ if t < sd => (0.0, true),
        _ => (t - sd, false),
    };
    let cycle = p.cycle();
    let k = (local / cycle).floor();
    let u = local - k * cycle;

    let (p_mj, dp, ddp) = if idle {
        (0.0, 0.0, 0.0)
    } else {
        min_jerk((u % sd) / sd)
    };
    let vel = dp / sd;
    let acc = ddp / (sd * sd);

    let mut lateral = Pose::default();
    let mut lateral_vel = Pose::default();
    let mut lateral_acc = Pose::default();
    let reference = if idle || u < sd {
        lateral.x = p.dx * p_mj;
        lateral.rx = p.rot_x_deg * p_mj;
        lateral_vel.x = p.dx * vel;
        lateral_vel.rx = p.rot_x_deg * vel;
        lateral_acc.x = p.dx * acc;
        lateral_acc.rx = p.rot_x_deg * acc;
        ReferenceKinematics {
            x_e: p.raised_depth() + p.dz * p_mj,
            xd_e: p.dz * vel,
            xdd_e: p.dz * acc,
        }
    } else {
        // correction is frozen at the start of the return movement so each
        // movement is a clean quintic between fixed endpoints
        let t_return = if arm == 0 {
            k * cycle + sd
        } else {
            k * cycle + 2.0 * sd
        };
        let r2 = p.return_rotation(t_return);
        lateral.x = p.dx * (1.0 - p_mj);
        lateral.rx = p.rot_x_deg - r2 * p_mj;
        lateral_vel.x = -p.dx * vel;
        lateral_vel.rx = -r2 * vel;
        lateral_acc.x = -p.dx * acc;
        lateral_acc.rx = -r2 * acc;
        ReferenceKinematics {
            x_e: p.strike_depth - p.dz * p_mj,
            xd_e: -p.dz * vel,
            xdd_e: -p.dz * acc,
        }
    };
    TickCommand {
        reference,
        lateral,
        lateral_vel,
        lateral_acc,
        approach_offset: 0.0,
        approach_offset_rate: 0.0,
        f_d: 0.0,
        mode: Mode::PositionDominant,
    }
}

// --------------------------------------------------------------- press

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PressParams {
    pub f_max: f64,
    pub f_min: f64,
    pub hold_peak: f64,
    pub hold_trough: f64,
    /// Period of the underlying sine, s.
    pub sine_period: f64,
}

impl Default for PressParams {
    fn default() -> Self {
        Self {
            f_max: 43.2,
            f_min: 8.5,
            hold_peak: 3.0,
            hold_trough: 1.0,
            sine_period: 1.26,
        }
    }
}

impl PressParams {
    pub fn check(&self) -> Result<(), String> {
        if !(self.f_min.is_finite() && self.f_min >= 0.0) {
            return Err("f_min ≥ 0".into());
        }
        if !(self.f_max.is_finite() && self.f_max > self.f_min) {
            return Err("f_max > f_min".into());
        }
        if !(self.sine_period.is_finite() && self.sine_period > 0.0) {
            return Err("sine_period > 0".into());
        }
        if !(self.hold_peak.is_finite() && self.hold_peak >= 0.0) {
            return Err("hold_peak ≥ 0".into());
        }
        if !(self.hold_trough.is_finite() && self.hold_trough >= 0.0) {
            return Err("hold_trough ≥ 0".into());
        }
        Ok(())
    }

    pub fn cycle(&self) -> f64 {
        self.sine_period + self.hold_peak + self.hold_trough
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.f_max + self.f_min)
    }

    pub fn amplitude(&self) -> f64 {
        0.5 * (self.f_max - self.f_min)
    }
}

/// Desired normal force: quarter-sine rise to `f_max`, hold, half-sine fall
/// to `f_min`, hold, quarter-sine rise back to the midpoint.
pub fn press_desired_force(t: f64, p: &PressParams) -> f64 {
    let ts = p.sine_period;
    let w = 2.0 * PI / ts;
    let (mid, amp) = (p.mid(), p.amplitude());
    let cycle = p.cycle();
    let mut u = t - (t / cycle).floor() * cycle;

    let quarter = 0.25 * ts;
    if u < quarter {
        return mid + amp * (w * u).sin();
    }
    u -= quarter;
    if u < p.hold_peak {
        return p.f_max;
    }
    u -= p.hold_peak;
    if u < 0.5 * ts {
        return mid + amp * (w * u).cos();
    }
    u -= 0.5 * ts;
    if u < p.hold_trough {
        return p.f_min;
    }
    u -= p.hold_trough;
    (mid - amp * (w * u).cos()).clamp(p.f_min, p.f_max)
}

pub fn press_command(t: f64, p: &PressParams) -> TickCommand {
    TickCommand::force_tracking(press_desired_force(t, p))
}

// ---------------------------------------------------------------- push

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PushParams {
    pub y0: f64,
    pub z0: f64,
    /// Half the stroke length, m.
    pub amp: f64,
    /// Stroke angular rate, rad/s.
    pub omega: f64,
    pub f_push: f64,
}

impl Default for PushParams {
    fn default() -> Self {
        Self {
            y0: 0.0,
            z0: 0.0,
            amp: 0.10,
            omega: 2.0 * PI * 0.88 / 2.0,
            f_push: 29.0,
        }
    }
}

impl PushParams {
    pub fn check(&self) -> Result<(), String> {
        if !(self.amp.is_finite() && self.amp > 0.0) {
            return Err("amp > 0".into());
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err("omega > 0".into());
        }
        if !(self.f_push.is_finite() && self.f_push > 0.0) {
            return Err("f_push > 0".into());
        }
        if !(self.y0.is_finite() && self.z0.is_finite()) {
            return Err("y0, z0 finite".into());
        }
        Ok(())
    }

    pub fn cycle(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn stroke_hz(&self) -> f64 {
        self.omega / (2.0 * PI)
    }
}

/// Lateral `y = y0 + A·sin(ωt)` with analytic rates; the approach axis is
/// left to the admittance loop.
pub fn push_command(t: f64, p: &PushParams) -> TickCommand {
    let (s, c) = (p.omega * t).sin_cos();
    let mut cmd = TickCommand::force_tracking(p.f_push);
    cmd.lateral.y = p.y0 + p.amp * s;
    cmd.lateral_vel.y = p.amp * p.omega * c;
    cmd.lateral_acc.y = -p.amp * p.omega * p.omega * s;
    cmd
}

// ------------------------------------------------------------- vibrate

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VibrateParams {
    pub f_activate: f64,
    pub vib_freq: f64,
    pub vib_amp: f64,
}

impl Default for VibrateParams {
    fn default() -> Self {
        Self {
            f_activate: 20.0,
            vib_freq: 7.33,
            vib_amp: 0.0015,
        }
    }
}

impl VibrateParams {
    pub fn check(&self) -> Result<(), String> {
        if !(self.f_activate.is_finite() && self.f_activate > 0.0) {
            return Err("f_activate > 0".into());
        }
        if !(self.vib_freq.is_finite() && self.vib_freq > 0.0) {
            return Err("vib_freq > 0".into());
        }
        if !(self.vib_amp.is_finite() && self.vib_amp > 0.0) {
            return Err("vib_amp > 0".into());
        }
        Ok(())
    }

    pub fn cycle(&self) -> f64 {
        1.0 / self.vib_freq
    }
}

/// Holds `f_activate` until the measured force first reaches it, then
/// superimposes the vibration on the approach axis.
///
/// `activated` carries the activation time once the threshold has been hit.
pub fn vibrate_command(
    t: f64,
    p: &VibrateParams,
    f_e_now: f64,
    activated: Option<f64>,
) -> (TickCommand, Option<f64>) {
    let activated = activated.or((f_e_now >= p.f_activate).then_some(t));
    let mut cmd = TickCommand::force_tracking(p.f_activate);
    if let Some(t_act) = activated {
        let w = 2.0 * PI * p.vib_freq;
        let (s, c) = (w * (t - t_act)).sin_cos();
        cmd.approach_offset = p.vib_amp * s;
        cmd.approach_offset_rate = p.vib_amp * w * c;
    }
    (cmd, activated)
}

// ------------------------------------------------------------ selector

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TechniqueKind {
    Beat,
    Press,
    Push,
    Vibrate,
}

impl TechniqueKind {
    pub const ALL: [TechniqueKind; 4] = [Self::Beat, Self::Press, Self::Push, Self::Vibrate];

    pub fn name(self) -> &'static str {
        match self {
            Self::Beat => "beat",
            Self::Press => "press",
            Self::Push => "push",
            Self::Vibrate => "vibrate",
        }
    }
}

impl fmt::Display for TechniqueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTechnique(pub String);

impl fmt::Display for UnknownTechnique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown technique `{}` (expected beat, press, push or vibrate)",
            self.0
        )
    }
}

impl std::error::Error for UnknownTechnique {}

impl FromStr for TechniqueKind {
    type Err = UnknownTechnique;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "beat" => Ok(Self::Beat),
            "press" => Ok(Self::Press),
            "push" => Ok(Self::Push),
            "vibrate" => Ok(Self::Vibrate),
            _ => Err(UnknownTechnique(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Technique {
    Beat(BeatParams),
    Press(PressParams),
    Push(PushParams),
    Vibrate(VibrateParams),
}

impl Technique {
    pub fn default_for(kind: TechniqueKind) -> Self {
        match kind {
            TechniqueKind::Beat => Self::Beat(BeatParams::default()),
            TechniqueKind::Press => Self::Press(PressParams::default()),
            TechniqueKind::Push => Self::Push(PushParams::default()),
            TechniqueKind::Vibrate => Self::Vibrate(VibrateParams::default()),
        }
    }

    pub fn kind(&self) -> TechniqueKind {
        match self {
            Self::Beat(_) => TechniqueKind::Beat,
            Self::Press(_) => TechniqueKind::Press,
            Self::Push(_) => TechniqueKind::Push,
            Self::Vibrate(_) => TechniqueKind::Vibrate,
        }
    }

    /// Period of the technique's rhythm. For beat this is one arm's
    /// strike-and-return cycle.
    pub fn cycle(&self) -> f64 {
        match self {
            Self::Beat(p) => p.cycle(),
            Self::Press(p) => p.cycle(),
            Self::Push(p) => p.cycle(),
            Self::Vibrate(p) => p.cycle(),
        }
    }

    pub fn check(&self) -> Result<(), String> {
        match self {
            Self::Beat(p) => p.check(),
            Self::Press(p) => p.check(),
            Self::Push(p) => p.check(),
            Self::Vibrate(p) => p.check(),
        }
    }
}

/// Technique selection plus total simulated time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TechniqueSpec {
    pub technique: Technique,
    pub duration: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn beat_no_corr() -> BeatParams {
        BeatParams {
            corr_amp_deg: 0.0,
            corr_delta_deg: 0.0,
            ..BeatParams::default()
        }
    }

    #[test]
    fn beat_starts_raised_at_rest() {
        let p = BeatParams::default();
        let c = beat_command(0.0, &p);
        assert_eq!(c.reference.x_e, p.raised_depth());
        assert_eq!(c.reference.xd_e, 0.0);
        assert_eq!(c.lateral.rx, 0.0);
        assert_eq!(c.mode, Mode::PositionDominant);
        assert_eq!(c.f_d, 0.0);
    }

    #[test]
    fn beat_struck_pose_at_stroke_end() {
        let p = BeatParams::default();
        let c = beat_command(p.stroke_duration, &p);
        assert!((c.lateral.rx - 25.0).abs() < 1e-12);
        assert!((c.lateral.x - 0.03).abs() < 1e-12);
        assert!((c.reference.x_e - p.raised_depth() - 0.16).abs() < 1e-12);
    }

    #[test]
    fn beat_midpoint_is_half_stroke() {
        let p = BeatParams::default();
        let c = beat_command(0.5, &p);
        assert!((c.reference.x_e - p.raised_depth() - 0.08).abs() < 1e-12);
    }

    #[test]
    fn beat_return_rotation_includes_correction() {
        let p = BeatParams {
            corr_amp_deg: 1.0,
            corr_omega: 0.0,
            corr_delta_deg: 0.5,
            ..BeatParams::default()
        };
        // end of the return movement: rx = rot - (rot + 1 + 0.5)
        let c = beat_command(2.0 - 1e-12, &p);
        assert!((c.lateral.rx + 1.5).abs() < 1e-6);
        assert_eq!(p.return_rotation(3.0), 26.5);
    }

    #[test]
    fn beat_endpoints_have_zero_rate() {
        let p = BeatParams::default();
        for t in [0.0, 1.0, 2.0, 3.0] {
            let c = beat_command(t, &p);
            assert!(c.reference.xd_e.abs() < 1e-12, "t={t}");
            assert!(c.reference.xdd_e.abs() < 1e-12, "t={t}");
            assert!(c.lateral_vel.rx.abs() < 1e-10);
        }
    }

    #[test]
    fn second_arm_is_shifted() {
        let p = beat_no_corr();
        let idle = beat_arm_command(0.4, &p, 1);
        assert_eq!(idle.reference.x_e, p.raised_depth());
        for t in [1.0, 1.3, 2.0, 2.7, 3.5] {
            let a = beat_arm_command(t, &p, 1);
            let b = beat_arm_command(t - 1.0, &p, 0);
            assert!((a.reference.x_e - b.reference.x_e).abs() < 1e-12);
        }
    }

    #[test]
    fn press_examples() {
        let p = PressParams::default();
        assert!((press_desired_force(0.0, &p) - 25.85).abs() < 1e-12);
        assert_eq!(press_desired_force(p.sine_period / 4.0 + 1.0, &p), 43.2);
        assert!((p.cycle() - 5.26).abs() < 1e-12);
        assert!((1.0 / p.cycle() - 0.190).abs() < 5e-4);
    }

    #[test]
    fn press_continuous_at_boundaries() {
        let p = PressParams::default();
        let q = p.sine_period / 4.0;
        let bounds = [
            q,
            q + p.hold_peak,
            q + p.hold_peak + 2.0 * q,
            q + p.hold_peak + 2.0 * q + p.hold_trough,
            p.cycle(),
        ];
        for b in bounds {
            let l = press_desired_force(b - 1e-12, &p);
            let r = press_desired_force(b + 1e-12, &p);
            assert!((l - r).abs() < 1e-9, "jump {l} -> {r} at {b}");
        }
    }

    #[test]
    fn push_examples() {
        let p = PushParams::default();
        let c = push_command(0.0, &p);
        assert_eq!(c.lateral.y, p.y0);
        assert!((c.lateral_vel.y - p.amp * p.omega).abs() < 1e-15);
        let c = push_command(PI / (2.0 * p.omega), &p);
        assert!((c.lateral.y - p.y0 - 0.10).abs() < 1e-12);
        assert_eq!(c.f_d, 29.0);
        assert_eq!(c.mode, Mode::ForceTracking);
    }

    #[test]
    fn vibrate_activation() {
        let p = VibrateParams::default();
        let (c, a) = vibrate_command(0.01, &p, 0.0, None);
        assert_eq!(a, None);
        assert_eq!(c.f_d, 20.0);
        assert_eq!(c.approach_offset, 0.0);

        let (c, a) = vibrate_command(0.5, &p, 20.0, None);
        assert_eq!(a, Some(0.5));
        assert_eq!(c.approach_offset, 0.0);

        // latched: force dropping below threshold does not deactivate
        let (c, a) = vibrate_command(0.5 + 0.25 / p.vib_freq, &p, 0.0, a);
        assert_eq!(a, Some(0.5));
        assert!((c.approach_offset - p.vib_amp).abs() < 1e-12);
    }

    #[test]
    fn technique_names_parse() {
        for k in TechniqueKind::ALL {
            assert_eq!(k.name().parse::<TechniqueKind>().unwrap(), k);
        }
        assert!("knead".parse::<TechniqueKind>().is_err());
    }

    #[test]
    fn param_checks() {
        assert!(BeatParams {
            n_arms: 3,
            ..Default::default()
        }
        .check()
        .is_err());
        assert!(PressParams {
            f_max: 5.0,
            f_min: 8.0,
            ..Default::default()
        }
        .check()
        .is_err());
        assert!(PushParams {
            omega: 0.0,
            ..Default::default()
        }
        .check()
        .is_err());
        assert!(VibrateParams {
            vib_amp: 0.0,
            ..Default::default()
        }
        .check()
        .is_err());
        for k in TechniqueKind::ALL {
            assert!(Technique::default_for(k).check().is_ok());
        }
    }

    proptest! {
        #[test]
        fn press_within_envelope(t in 0.0..100.0f64) {
            let p = PressParams::default();
            let f = press_desired_force(t, &p);
            prop_assert!(f >= p.f_min && f <= p.f_max);
        }

        #[test]
        fn press_periodic(t in 0.0..50.0f64) {
            let p = PressParams::default();
            let a = press_desired_force(t, &p);
            let b = press_desired_force(t + p.cycle(), &p);
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn push_periodic_and_analytic(t in 0.0..50.0f64) {
            let p = PushParams::default();
            let a = push_command(t, &p);
            let b = push_command(t + p.cycle(), &p);
            prop_assert!((a.lateral.y - b.lateral.y).abs() < 1e-9);
            let expected = p.amp * p.omega * (p.omega * t).cos();
            prop_assert!((a.lateral_vel.y - expected).abs() < 1e-9);
        }

        #[test]
        fn beat_periodic(t in 0.0..40.0f64) {
            let p = beat_no_corr();
            for arm in 0..2u8 {
                let a = beat_arm_command(t + 1.0, &p, arm);
                let b = beat_arm_command(t + 1.0 + p.cycle(), &p, arm);
                prop_assert!((a.reference.x_e - b.reference.x_e).abs() < 1e-9);
                prop_assert!((a.lateral.rx - b.lateral.rx).abs() < 1e-9);
            }
        }

        #[test]
        fn vibrate_periodic_after_activation(t in 0.0..20.0f64) {
            let p = VibrateParams::default();
            let (a, _) = vibrate_command(1.0 + t, &p, 0.0, Some(1.0));
            let (b, _) = vibrate_command(1.0 + t + p.cycle(), &p, 0.0, Some(1.0));
            prop_assert!((a.approach_offset - b.approach_offset).abs() < 1e-9);
        }
    }
}
