//! Field-by-field comparison of trace statistics against a reference row.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::reference::{reference_stats, Reference};
use super::TraceStats;
use crate::techniques::TechniqueKind;

/// Acceptance rule for one statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tolerance {
    /// `|delta| ≤ rel · |reference|`
    Rel(f64),
    /// `|delta| ≤ abs`
    Abs(f64),
    /// Value and reference share a sign (zero only matches zero).
    Sign,
    /// Reported but never fails.
    Off,
}

impl Tolerance {
    fn passes(self, value: Option<f64>, reference: f64) -> bool {
        let Some(v) = value else {
            return self == Tolerance::Off;
        };
        let delta = (v - reference).abs();
        match self {
            Tolerance::Rel(r) => delta <= r * reference.abs(),
            Tolerance::Abs(a) => delta <= a,
            Tolerance::Sign => sign(v) == sign(reference),
            Tolerance::Off => true,
        }
    }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub max: Tolerance,
    pub min: Tolerance,
    pub mean: Tolerance,
    pub std: Tolerance,
    pub skew: Tolerance,
    pub kurt: Tolerance,
    pub freq: Tolerance,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            max: Tolerance::Rel(0.15),
            min: Tolerance::Rel(0.15),
            mean: Tolerance::Rel(0.15),
            std: Tolerance::Off,
            skew: Tolerance::Sign,
            kurt: Tolerance::Sign,
            freq: Tolerance::Abs(0.15),
        }
    }
}

impl Tolerances {
    /// Every field must match exactly.
    pub fn exact() -> Self {
        Self::uniform(Tolerance::Abs(0.0))
    }

    pub fn uniform(t: Tolerance) -> Self {
        Self {
            max: t,
            min: t,
            mean: t,
            std: t,
            skew: t,
            kurt: t,
            freq: t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDelta {
    pub value: Option<f64>,
    #[serde(rename = "ref")]
    pub reference: f64,
    pub delta: Option<f64>,
    pub rel_delta: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub technique: TechniqueKind,
    pub reference: Reference,
    pub fields: BTreeMap<String, FieldDelta>,
}

impl ComparisonReport {
    pub fn all_pass(&self) -> bool {
        self.fields.values().all(|f| f.pass)
    }

    pub fn failed(&self) -> impl Iterator<Item = &str> {
        self.fields
            .iter()
            .filter(|(_, f)| !f.pass)
            .map(|(k, _)| k.as_str())
    }
}

/// Per-field deltas of `stats` against an arbitrary row.
pub fn compare_stats(
    stats: &TraceStats,
    reference: &TraceStats,
    tol: &Tolerances,
) -> BTreeMap<String, FieldDelta> {
    let rows: [(&str, Option<f64>, Option<f64>, Tolerance); 7] = [
        ("max", Some(stats.max), Some(reference.max), tol.max),
        ("min", Some(stats.min), Some(reference.min), tol.min),
        ("mean", Some(stats.mean), Some(reference.mean), tol.mean),
        ("std", Some(stats.std), Some(reference.std), tol.std),
        ("skew", stats.skew, reference.skew, tol.skew),
        ("kurt", stats.kurt, reference.kurt, tol.kurt),
        ("freq", stats.freq, reference.freq, tol.freq),
    ];
    rows.into_iter()
        .filter_map(|(name, value, r, t)| {
            let r = r?;
            let delta = value.map(|v| v - r);
            let rel_delta = delta.filter(|_| r != 0.0).map(|d| d / r);
            let pass = t.passes(value, r);
            Some((
                name.to_string(),
                FieldDelta {
                    value,
                    reference: r,
                    delta,
                    rel_delta,
                    pass,
                },
            ))
        })
        .collect()
}

pub fn compare_to_reference(
    stats: &TraceStats,
    technique: TechniqueKind,
    which: Reference,
    tol: &Tolerances,
) -> ComparisonReport {
    let reference = reference_stats(technique, which);
    ComparisonReport {
        technique,
        reference: which,
        fields: compare_stats(stats, &reference, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::reference::*;

    #[test]
    fn identical_row_has_zero_deltas() {
        let r = compare_to_reference(
            &EXPERT_BEAT,
            TechniqueKind::Beat,
            Reference::Expert,
            &Tolerances::exact(),
        );
        assert!(r.all_pass());
        assert_eq!(r.fields.len(), 7);
        assert!(r.fields.values().all(|f| f.delta == Some(0.0)));
    }

    #[test]
    fn robot_press_vs_expert_mean() {
        let r = compare_to_reference(
            &ROBOT_PRESS,
            TechniqueKind::Press,
            Reference::Expert,
            &Tolerances::default(),
        );
        let mean = &r.fields["mean"];
        assert!((mean.delta.unwrap() - 16.08).abs() < 1e-12);
        assert!((mean.rel_delta.unwrap() - 16.08 / 15.64).abs() < 1e-12);
    }

    #[test]
    fn zero_tolerance_flags_every_nonzero_delta() {
        let mut s = ROBOT_VIBRATE;
        s.mean += 1e-9;
        let r = compare_to_reference(
            &s,
            TechniqueKind::Vibrate,
            Reference::Robot,
            &Tolerances::exact(),
        );
        assert_eq!(r.failed().collect::<Vec<_>>(), vec!["mean"]);
    }

    #[test]
    fn robot_beat_fails_expert_frequency() {
        let r = compare_to_reference(
            &ROBOT_BEAT,
            TechniqueKind::Beat,
            Reference::Expert,
            &Tolerances::default(),
        );
        assert!(!r.fields["freq"].pass);
        assert!(!r.all_pass());
        // min 0 vs 0 passes a relative tolerance, delta is exact
        assert!(r.fields["min"].pass);
        assert_eq!(r.fields["min"].rel_delta, None);
    }

    #[test]
    fn missing_moments_fail_unless_off() {
        let s = TraceStats {
            skew: None,
            kurt: None,
            freq: None,
            ..ROBOT_PUSH
        };
        let r = compare_to_reference(
            &s,
            TechniqueKind::Push,
            Reference::Robot,
            &Tolerances::default(),
        );
        assert!(!r.fields["skew"].pass);
        assert_eq!(r.fields["skew"].delta, None);
        let off = Tolerances::uniform(Tolerance::Off);
        assert!(compare_to_reference(&s, TechniqueKind::Push, Reference::Robot, &off).all_pass());
    }

    #[test]
    fn tolerance_toml_shape() {
        let t: Tolerances =
            toml::from_str("max = { rel = 0.1 }\nskew = \"off\"\nfreq = { abs = 0.2 }").unwrap();
        assert_eq!(t.max, Tolerance::Rel(0.1));
        assert_eq!(t.skew, Tolerance::Off);
        assert_eq!(t.freq, Tolerance::Abs(0.2));
        assert_eq!(t.kurt, Tolerance::Sign);
    }

    #[test]
    fn report_json_shape() {
        let r = compare_to_reference(
            &ROBOT_BEAT,
            TechniqueKind::Beat,
            Reference::Robot,
            &Tolerances::default(),
        );
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["technique"], "beat");
        assert_eq!(v["reference"], "robot");
        assert_eq!(v["fields"]["freq"]["ref"], 1.0);
        assert_eq!(v["fields"]["freq"]["pass"], true);
    }
}
