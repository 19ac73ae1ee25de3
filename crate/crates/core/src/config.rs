//! Evaluation configuration.
//!
//! Everything a number depends on lives here: pitch and goal dimensions,
//! run/dive constants, feature parameters, shot targets and model weights.
//! Loaded from TOML; every field has a default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GoalPoint;
use crate::kinematics::{DiveModelParams, RunModelParams};
use crate::pitch::{GoalConfig, PitchConfig};
use crate::probability::{
    import_model, BlockParams, KeeperAngleMode, ProbabilityError, ProbabilityModel, BLOCK_FEATURES,
    SAVE_FEATURES,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("model weights {path}: {source}")]
    Weights { path: String, source: ProbabilityError },
}

/// Simulated shot end points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShotTargetConfig(pub Vec<GoalPoint>);

impl Default for ShotTargetConfig {
    /// 0.2 m inside each post, at low, middle and high rows.
    fn default() -> Self {
        let mut v = Vec::with_capacity(6);
        for y in [-3.46, 3.46] {
            for z in [0.24, 1.22, 2.20] {
                v.push(GoalPoint::new(y, z));
            }
        }
        Self(v)
    }
}

/// Goal-projection grid: `cols` across the mouth, `rows` from the crossbar down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatmapGrid {
    pub cols: usize,
    pub rows: usize,
}

impl Default for HeatmapGrid {
    fn default() -> Self {
        Self { cols: 12, rows: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EligibilityConfig {
    /// Share of the pitch length, measured from the goal line, in which the
    /// position model applies.
    pub zone_fraction: f64,
}

impl Default for EligibilityConfig {
    fn default() -> Self {
        Self { zone_fraction: 0.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Observed keeper displacements shorter than this count as staying, m.
    pub stay_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { stay_threshold: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub block: ProbabilityModel,
    pub save: ProbabilityModel,
    /// Optional weights files overriding the inline models; relative paths
    /// resolve against the configuration file's directory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_weights_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub save_weights_file: Option<PathBuf>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            block: ProbabilityModel::default_block(),
            save: ProbabilityModel::default_save(),
            block_weights_file: None,
            save_weights_file: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub pitch: PitchConfig,
    pub goal: GoalConfig,
    pub run: RunModelParams,
    pub dive: DiveModelParams,
    pub block: BlockParams,
    pub keeper_angle: KeeperAngleMode,
    pub targets: ShotTargetConfig,
    pub heatmap: HeatmapGrid,
    pub eligibility: EligibilityConfig,
    pub analysis: AnalysisConfig,
    pub models: ModelConfig,
}

impl Config {
    /// Furthest ball distance from the goal line at which the model applies.
    pub fn zone_limit(&self) -> f64 {
        self.eligibility.zone_fraction * self.pitch.length
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Config = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    /// Reads a TOML file and any weights files it references.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let mut cfg: Config = toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(file) = &cfg.models.block_weights_file {
            cfg.models.block = read_weights(&base.join(file), &BLOCK_FEATURES)?;
        }
        if let Some(file) = &cfg.models.save_weights_file {
            cfg.models.save = read_weights(&base.join(file), &SAVE_FEATURES)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        self.run.validate().map_err(ConfigError::Invalid)?;
        self.dive.validate().map_err(ConfigError::Invalid)?;
        for (name, v) in [
            ("pitch.length", self.pitch.length),
            ("pitch.width", self.pitch.width),
            ("goal.width", self.goal.width),
            ("goal.height", self.goal.height),
            ("block.corridor_half_width", self.block.corridor_half_width),
            ("block.defender_speed", self.block.defender_speed),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.pitch.margin >= 0.0) {
            return invalid("pitch.margin must be non-negative".into());
        }
        if !(self.eligibility.zone_fraction > 0.0 && self.eligibility.zone_fraction <= 1.0) {
            return invalid("eligibility.zone_fraction must be in (0, 1]".into());
        }
        if self.targets.0.is_empty() {
            return invalid("targets must not be empty".into());
        }
        if let Some(t) = self.targets.0.iter().find(|t| !self.goal.contains(**t)) {
            return invalid(format!("target [{}, {}] lies outside the goal mouth", t.y, t.z));
        }
        if self.heatmap.cols == 0 || self.heatmap.rows == 0 {
            return invalid("heatmap grid must be at least 1x1".into());
        }
        self.models
            .block
            .check_schema(&BLOCK_FEATURES)
            .map_err(|e| ConfigError::Invalid(format!("models.block: {e}")))?;
        self.models
            .save
            .check_schema(&SAVE_FEATURES)
            .map_err(|e| ConfigError::Invalid(format!("models.save: {e}")))?;
        Ok(())
    }
}

fn read_weights(path: &Path, schema: &[&str]) -> Result<ProbabilityModel, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    import_model(&text, schema).map_err(|source| ConfigError::Weights { path: path.display().to_string(), source })
}
