//! Published characterization of expert and robot massage force traces,
//! one row per technique.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::TraceStats;
use crate::techniques::TechniqueKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    Expert,
    Robot,
}

impl Reference {
    pub fn name(self) -> &'static str {
        match self {
            Self::Expert => "expert",
            Self::Robot => "robot",
        }
    }
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reference {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "expert" => Ok(Self::Expert),
            "robot" => Ok(Self::Robot),
            _ => Err(format!(
                "unknown reference `{s}` (expected expert or robot)"
            )),
        }
    }
}

const fn row(
    max: f64,
    min: f64,
    mean: f64,
    std: f64,
    skew: f64,
    kurt: f64,
    freq: f64,
) -> TraceStats {
    TraceStats {
        max,
        min,
        mean,
        std,
        skew: Some(skew),
        kurt: Some(kurt),
        freq: Some(freq),
    }
}

pub const EXPERT_BEAT: TraceStats = row(79.67, 0.00, 64.90, 12.17, -4.19, 21.78, 2.79);
pub const EXPERT_PRESS: TraceStats = row(42.59, 8.20, 15.64, 6.67, -0.62, -1.07, 0.14);
pub const EXPERT_PUSH: TraceStats = row(81.65, 0.00, 28.94, 9.02, 0.11, -0.16, 0.36);
pub const EXPERT_VIBRATE: TraceStats = row(25.74, 14.39, 20.07, 2.80, -0.13, -0.04, 7.49);

pub const ROBOT_BEAT: TraceStats = row(76.67, 0.00, 8.45, 18.02, 1.99, 2.73, 1.00);
pub const ROBOT_PRESS: TraceStats = row(43.22, 8.50, 31.72, 13.92, -0.78, -1.24, 0.19);
pub const ROBOT_PUSH: TraceStats = row(82.83, 0.00, 27.51, 27.78, 0.34, -1.26, 0.88);
pub const ROBOT_VIBRATE: TraceStats = row(26.96, 12.69, 19.16, 4.18, 0.09, -1.52, 7.33);

pub fn reference_stats(technique: TechniqueKind, which: Reference) -> TraceStats {
    use TechniqueKind::*;
    match (which, technique) {
        (Reference::Expert, Beat) => EXPERT_BEAT,
        (Reference::Expert, Press) => EXPERT_PRESS,
        (Reference::Expert, Push) => EXPERT_PUSH,
        (Reference::Expert, Vibrate) => EXPERT_VIBRATE,
        (Reference::Robot, Beat) => ROBOT_BEAT,
        (Reference::Robot, Press) => ROBOT_PRESS,
        (Reference::Robot, Push) => ROBOT_PUSH,
        (Reference::Robot, Vibrate) => ROBOT_VIBRATE,
    }
}
