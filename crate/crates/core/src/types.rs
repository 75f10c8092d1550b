//! Shared domain types: end-effector pose, force samples and uniformly
//! sampled force traces.
//!
//! World frame follows the massage axis convention: Z is the approach axis
//! (normal to the treatment surface, pointing away from the body), X/Y span
//! the surface. Rotations are extrinsic, in degrees.
//!
//! Controller math runs on a single scalar "approach coordinate"
//! `s = z_surface - z_tip` (m); `s > 0` means the tip penetrates tissue.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Tolerance on sample spacing, seconds.
pub const SPACING_TOL: f64 = 1e-9;

/// End-effector pose. Positions in meters, rotations in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl Pose {
    pub fn is_valid(&self) -> bool {
        let pos = [self.x, self.y, self.z].iter().all(|v| v.is_finite());
        let rot = [self.rx, self.ry, self.rz]
            .iter()
            .all(|v| v.is_finite() && (-360.0..=360.0).contains(v));
        pos && rot
    }
}

/// A single force measurement. `fz` is the normal (approach-axis) force and
/// is never negative; `fy` is tangential and may be zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceSample {
    pub t: f64,
    pub fz: f64,
    pub fy: f64,
}

/// Uniformly sampled force recording with the commanded pose at each tick.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceTrace {
    pub sample_rate: f64,
    pub samples: Vec<ForceSample>,
    pub poses: Vec<Pose>,
}

/// First invariant a trace breaks, with the offending sample index where
/// one applies.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceViolation {
    BadSampleRate(f64),
    LengthMismatch { samples: usize, poses: usize },
    TooShort(usize),
    NonFinite(usize),
    NegativeFz(usize),
    NonIncreasingTime(usize),
    NegativeTime(usize),
    NonUniformSpacing(usize),
    InvalidPose(usize),
}

impl fmt::Display for TraceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BadSampleRate(r) => write!(f, "sample rate {r} is not a positive finite number"),
            Self::LengthMismatch { samples, poses } => {
                write!(f, "{samples} samples but {poses} poses")
            }
            Self::TooShort(n) => write!(f, "trace has {n} samples, need at least 2"),
            Self::NonFinite(i) => write!(f, "non-finite value at index {i}"),
            Self::NegativeFz(i) => write!(f, "negative fz at index {i}"),
            Self::NonIncreasingTime(i) => write!(f, "non-increasing t at index {i}"),
            Self::NegativeTime(i) => write!(f, "negative t at index {i}"),
            Self::NonUniformSpacing(i) => write!(f, "non-uniform spacing at index {i}"),
            Self::InvalidPose(i) => write!(f, "invalid pose at index {i}"),
        }
    }
}

impl std::error::Error for TraceViolation {}

/// Checks every [`ForceTrace`] invariant and reports the first violation.
pub fn validate_trace(trace: &ForceTrace) -> Result<(), TraceViolation> {
    if !(trace.sample_rate.is_finite() && trace.sample_rate > 0.0) {
        return Err(TraceViolation::BadSampleRate(trace.sample_rate));
    }
    let n = trace.samples.len();
    if n != trace.poses.len() {
        return Err(TraceViolation::LengthMismatch {
            samples: n,
            poses: trace.poses.len(),
        });
    }
    if n < 2 {
        return Err(TraceViolation::TooShort(n));
    }
    let dt = 1.0 / trace.sample_rate;
    for (i, (s, pose)) in trace.samples.iter().zip(&trace.poses).enumerate() {
        if !(s.t.is_finite() && s.fz.is_finite() && s.fy.is_finite()) {
            return Err(TraceViolation::NonFinite(i));
        }
        if s.t < 0.0 {
            return Err(TraceViolation::NegativeTime(i));
        }
        if s.fz < 0.0 {
            return Err(TraceViolation::NegativeFz(i));
        }
        if i > 0 {
            let step = s.t - trace.samples[i - 1].t;
            if step <= 0.0 {
                return Err(TraceViolation::NonIncreasingTime(i));
            }
            if (step - dt).abs() >= SPACING_TOL {
                return Err(TraceViolation::NonUniformSpacing(i));
            }
        }
        if !pose.is_valid() {
            return Err(TraceViolation::InvalidPose(i));
        }
    }
    Ok(())
}

impl ForceTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }

    pub fn fz(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.fz)
    }

    /// Index range of samples whose time falls in `[t0, t1]`.
    pub fn window_range(&self, window: Option<(f64, f64)>) -> std::ops::Range<usize> {
        let Some((t0, t1)) = window else {
            return 0..self.samples.len();
        };
        let start = self.samples.partition_point(|s| s.t < t0);
        let end = self.samples.partition_point(|s| s.t <= t1);
        start..end.max(start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(t: &[f64], fz: &[f64], rate: f64) -> ForceTrace {
        ForceTrace {
            sample_rate: rate,
            samples: t
                .iter()
                .zip(fz)
                .map(|(&t, &fz)| ForceSample { t, fz, fy: 0.0 })
                .collect(),
            poses: vec![Pose::default(); t.len()],
        }
    }

    #[test]
    fn minimal_trace_is_valid() {
        assert_eq!(
            validate_trace(&trace(&[0.0, 0.01], &[0.0, 1.0], 100.0)),
            Ok(())
        );
    }

    #[test]
    fn duplicate_timestamp() {
        let err = validate_trace(&trace(&[0.0, 0.01, 0.01], &[0.0; 3], 100.0)).unwrap_err();
        assert_eq!(err, TraceViolation::NonIncreasingTime(2));
        assert_eq!(err.to_string(), "non-increasing t at index 2");
    }

    #[test]
    fn negative_force() {
        let err = validate_trace(&trace(&[0.0, 0.01], &[0.0, -1.0], 100.0)).unwrap_err();
        assert_eq!(err.to_string(), "negative fz at index 1");
    }

    #[test]
    fn uneven_spacing_and_shape_errors() {
        let err = validate_trace(&trace(&[0.0, 0.01, 0.025], &[0.0; 3], 100.0)).unwrap_err();
        assert_eq!(err, TraceViolation::NonUniformSpacing(2));

        let err = validate_trace(&trace(&[0.0], &[0.0], 100.0)).unwrap_err();
        assert_eq!(err, TraceViolation::TooShort(1));

        let mut tr = trace(&[0.0, 0.01], &[0.0, 1.0], 100.0);
        tr.poses.pop();
        assert!(matches!(
            validate_trace(&tr),
            Err(TraceViolation::LengthMismatch { .. })
        ));

        let mut tr = trace(&[0.0, 0.01], &[0.0, 1.0], 100.0);
        tr.poses[1].rx = 400.0;
        assert_eq!(validate_trace(&tr), Err(TraceViolation::InvalidPose(1)));
    }

    #[test]
    fn window_selects_inclusive_range() {
        let tr = trace(&[0.0, 0.01, 0.02, 0.03], &[0.0; 4], 100.0);
        assert_eq!(tr.window_range(Some((0.01, 0.02))), 1..3);
        assert_eq!(tr.window_range(None), 0..4);
        assert_eq!(tr.window_range(Some((5.0, 6.0))), 4..4);
    }
}
