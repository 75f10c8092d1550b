//! Run configuration file: TOML sections `[sim]`, `[admittance]`, `[skin]`,
//! `[beat]`, `[press]`, `[push]`, `[vibrate]` and `[analysis]`. Unknown keys
//! are rejected; every section except `[sim]` may be omitted.

use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

use crate::admittance::AdmittanceParams;
use crate::analysis::Tolerances;
use crate::contact::SkinModel;
use crate::sim::{SimConfig, SimError};
use crate::techniques::{
    BeatParams, PressParams, PushParams, Technique, TechniqueKind, VibrateParams,
};

/// Technique cycles simulated when `sim.duration_s` is omitted: one warm-up
/// cycle plus five measured ones.
pub const DEFAULT_CYCLES: f64 = 6.0;

/// Vibrate has no natural cycle count; default run length, s.
pub const DEFAULT_VIBRATE_DURATION: f64 = 10.0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {cause}")]
    Io { path: String, cause: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<SimError> for ConfigError {
    fn from(e: SimError) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub technique: TechniqueKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub sim: SimSection,
    #[serde(default)]
    pub admittance: AdmittanceParams,
    #[serde(default)]
    pub skin: SkinModel,
    #[serde(default)]
    pub beat: BeatParams,
    #[serde(default)]
    pub press: PressParams,
    #[serde(default)]
    pub push: PushParams,
    #[serde(default)]
    pub vibrate: VibrateParams,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

impl RunConfig {
    pub fn for_technique(kind: TechniqueKind) -> Self {
        Self {
            sim: SimSection {
                technique: kind,
                duration_s: None,
                seed: 0,
            },
            admittance: Default::default(),
            skin: Default::default(),
            beat: Default::default(),
            press: Default::default(),
            push: Default::default(),
            vibrate: Default::default(),
            analysis: Default::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_table(table: toml::Table) -> Result<Self, ConfigError> {
        let cfg: RunConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::parse(&read(path)?)
    }

    pub fn technique(&self) -> Technique {
        match self.sim.technique {
            TechniqueKind::Beat => Technique::Beat(self.beat),
            TechniqueKind::Press => Technique::Press(self.press),
            TechniqueKind::Push => Technique::Push(self.push),
            TechniqueKind::Vibrate => Technique::Vibrate(self.vibrate),
        }
    }

    pub fn duration(&self) -> f64 {
        self.sim
            .duration_s
            .unwrap_or_else(|| match self.technique() {
                Technique::Vibrate(_) => DEFAULT_VIBRATE_DURATION,
                t => DEFAULT_CYCLES * t.cycle(),
            })
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            technique: self.technique(),
            admittance: self.admittance,
            skin: self.skin,
            duration: self.duration(),
            seed: self.sim.seed,
        }
    }

    pub fn window(&self) -> Option<(f64, f64)> {
        self.analysis.window.map(|[a, b]| (a, b))
    }

    /// Enforces every module invariant; messages name `section.key`.
    pub fn validate(&self) -> Result<(), ConfigError> {
        // sections of inactive techniques are checked too so typos surface early
        let checks = [
            ("beat", self.beat.check()),
            ("press", self.press.check()),
            ("push", self.push.check()),
            ("vibrate", self.vibrate.check()),
        ];
        for (section, r) in checks {
            r.map_err(|c| ConfigError::Invalid(format!("{section}.{c} violated")))?;
        }
        self.sim_config().check()?;
        if let Some([a, b]) = self.analysis.window {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(ConfigError::Invalid(
                    "analysis.window t0 < t1 violated".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

pub fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|cause| ConfigError::Io {
        path: path.display().to_string(),
        cause,
    })
}

pub fn parse_table(text: &str) -> Result<toml::Table, ConfigError> {
    text.parse::<toml::Table>()
        .map_err(|e| ConfigError::Parse(e.to_string()))
}

/// Parses a command-line value as a TOML scalar, falling back to a string.
pub fn parse_value(raw: &str) -> toml::Value {
    let raw = raw.trim();
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Sets `section.key` in a raw config table.
pub fn set_param(
    table: &mut toml::Table,
    param: &str,
    value: toml::Value,
) -> Result<(), ConfigError> {
    let (section, key) = param
        .split_once('.')
        .filter(|(s, k)| !s.is_empty() && !k.is_empty() && !k.contains('.'))
        .ok_or_else(|| ConfigError::Invalid(format!("parameter `{param}` must be section.key")))?;
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let sec = entry
        .as_table_mut()
        .ok_or_else(|| ConfigError::Invalid(format!("`{section}` is not a section")))?;
    sec.insert(key.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = RunConfig::parse("[sim]\ntechnique = \"press\"\n").unwrap();
        assert_eq!(cfg.admittance, AdmittanceParams::default());
        assert!((cfg.duration() - 6.0 * 5.26).abs() < 1e-9);
        assert_eq!(
            cfg.sim_config().technique,
            Technique::Press(PressParams::default())
        );
    }

    #[test]
    fn negative_sigma_names_key() {
        let err = RunConfig::parse("[sim]\ntechnique = \"press\"\n[admittance]\nsigma = -1.0\n")
            .unwrap_err();
        assert!(err.to_string().contains("admittance.sigma ≥ 0"), "{err}");
    }

    #[test]
    fn zero_stiffness_names_key() {
        let err = RunConfig::parse("[sim]\ntechnique = \"beat\"\n[skin]\nk = 0\n").unwrap_err();
        assert!(err.to_string().contains("skin.k > 0 violated"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let err =
            RunConfig::parse("[sim]\ntechnique = \"press\"\n[press]\nfmax = 40.0\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)));
        assert!(err.to_string().contains("fmax"), "{err}");
        assert!(RunConfig::parse("[sim]\ntechnique = \"press\"\n[massage]\n").is_err());
        assert!(RunConfig::parse("[sim]\ntechnique = \"knead\"\n").is_err());
    }

    #[test]
    fn integers_accepted_for_floats() {
        let cfg =
            RunConfig::parse("[sim]\ntechnique = \"push\"\nduration_s = 10\n[push]\nf_push = 30\n")
                .unwrap();
        assert_eq!(cfg.push.f_push, 30.0);
        assert_eq!(cfg.duration(), 10.0);
    }

    #[test]
    fn round_trips_through_toml() {
        let mut cfg = RunConfig::for_technique(TechniqueKind::Vibrate);
        cfg.analysis.window = Some([1.0, 5.0]);
        let back = RunConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn set_param_overrides() {
        let mut t = parse_table("[sim]\ntechnique = \"press\"\n").unwrap();
        set_param(&mut t, "admittance.sigma", parse_value("0.25")).unwrap();
        set_param(&mut t, "beat.n_arms", parse_value("1")).unwrap();
        let cfg = RunConfig::from_table(t).unwrap();
        assert_eq!(cfg.admittance.sigma, 0.25);
        assert_eq!(cfg.beat.n_arms, 1);
        let mut t = parse_table("").unwrap();
        assert!(set_param(&mut t, "sigma", parse_value("1")).is_err());
        assert_eq!(parse_value("press"), toml::Value::String("press".into()));
    }

    #[test]
    fn bad_window() {
        let err =
            RunConfig::parse("[sim]\ntechnique = \"press\"\n[analysis]\nwindow = [5.0, 1.0]\n")
                .unwrap_err();
        assert!(err.to_string().contains("analysis.window"));
    }
}
