//! Match file model.
//!
//! A match file is JSON with two top-level keys, `meta` and `events`. Teams
//! are labelled from the point of view of the analysed keeper: `defending`
//! is the keeper's side, `attacking` the opponent. Positions are `[x, y]`
//! meter pairs in the goal-centred frame (see [`crate::geometry`]). The
//! field-by-field schema lives in `docs/match-schema.md`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PitchPoint;
use crate::pitch::{GoalConfig, PitchConfig};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_PLAYERS_PER_SIDE: usize = 11;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("malformed match file at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("event {index} ({id}): {message}")]
    Event { index: usize, id: String, message: String },
    #[error("meta: {0}")]
    Meta(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot serialize match: {0}")]
    Serialize(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Team {
    Attacking,
    Defending,
}

impl Team {
    fn attacking() -> Self {
        Team::Attacking
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Pass,
    Carry,
    Shot,
    Clearance,
    Other,
}

/// Player positions captured at one event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameState {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goalkeeper: Option<PitchPoint>,
    #[serde(default)]
    pub defenders: Vec<PitchPoint>,
    #[serde(default)]
    pub attackers: Vec<PitchPoint>,
    /// Index into `attackers` of the player on the ball.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball_carrier: Option<usize>,
    #[serde(default)]
    pub under_pressure: bool,
    #[serde(default = "Team::attacking")]
    pub possession: Team,
}

impl GameState {
    pub fn shooter(&self) -> Option<PitchPoint> {
        self.ball_carrier.and_then(|i| self.attackers.get(i).copied())
    }

    pub fn with_goalkeeper(&self, gk: PitchPoint) -> Self {
        Self { goalkeeper: Some(gk), ..self.clone() }
    }

    /// Reflection of every position across the centre axis.
    pub fn mirrored(&self) -> Self {
        Self {
            goalkeeper: self.goalkeeper.map(PitchPoint::mirrored),
            defenders: self.defenders.iter().map(|p| p.mirrored()).collect(),
            attackers: self.attackers.iter().map(|p| p.mirrored()).collect(),
            ..self.clone()
        }
    }

    /// Structural checks shared by the file parser and the simulate endpoint.
    pub fn validate(&self, pitch: &PitchConfig) -> Result<(), String> {
        if self.defenders.len() > MAX_PLAYERS_PER_SIDE - usize::from(self.goalkeeper.is_some()) {
            return Err(format!("too many defending players ({} outfield)", self.defenders.len()));
        }
        if self.attackers.len() > MAX_PLAYERS_PER_SIDE {
            return Err(format!("too many attacking players ({})", self.attackers.len()));
        }
        if let Some(i) = self.ball_carrier {
            if i >= self.attackers.len() {
                return Err(format!("ball_carrier {i} out of range ({} attackers)", self.attackers.len()));
            }
        }
        let all = self.goalkeeper.iter().chain(&self.defenders).chain(&self.attackers);
        for p in all {
            if !pitch.accepts(*p) {
                return Err(format!("position [{}, {}] outside pitch bounds", p.x, p.y));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    pub id: String,
    /// Seconds from kickoff.
    pub timestamp: f64,
    #[serde(rename = "type")]
    pub kind: EventKind,
    pub team: Team,
    pub ball: PitchPoint,
    #[serde(default)]
    pub under_pressure: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freeze_frame: Option<GameState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchMeta {
    pub schema_version: u32,
    pub match_id: String,
    pub pitch_length: f64,
    pub pitch_width: f64,
    pub goal_width: f64,
    pub goal_height: f64,
}

impl MatchMeta {
    pub fn new(match_id: impl Into<String>) -> Self {
        let pitch = PitchConfig::default();
        let goal = GoalConfig::default();
        Self {
            schema_version: SCHEMA_VERSION,
            match_id: match_id.into(),
            pitch_length: pitch.length,
            pitch_width: pitch.width,
            goal_width: goal.width,
            goal_height: goal.height,
        }
    }

    pub fn pitch(&self) -> PitchConfig {
        PitchConfig { length: self.pitch_length, width: self.pitch_width, ..PitchConfig::default() }
    }

    pub fn goal(&self) -> GoalConfig {
        GoalConfig { width: self.goal_width, height: self.goal_height }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Match {
    pub meta: MatchMeta,
    pub events: Vec<Event>,
}

impl Match {
    pub fn id(&self) -> &str {
        &self.meta.match_id
    }

    /// Checks every invariant of the file format.
    pub fn validate(&self) -> Result<(), DataError> {
        let m = &self.meta;
        if m.schema_version != SCHEMA_VERSION {
            return Err(DataError::SchemaVersion(m.schema_version));
        }
        for (name, v) in [
            ("pitch_length", m.pitch_length),
            ("pitch_width", m.pitch_width),
            ("goal_width", m.goal_width),
            ("goal_height", m.goal_height),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(DataError::Meta(format!("{name} must be positive, got {v}")));
            }
        }
        if m.goal_width >= m.pitch_width {
            return Err(DataError::Meta("goal_width must be below pitch_width".into()));
        }
        let pitch = m.pitch();
        let mut last = f64::NEG_INFINITY;
        let mut seen = std::collections::HashSet::new();
        for (index, e) in self.events.iter().enumerate() {
            let fail = |message: String| DataError::Event { index, id: e.id.clone(), message };
            if !seen.insert(e.id.as_str()) {
                return Err(fail("duplicate event id".into()));
            }
            if !e.timestamp.is_finite() || e.timestamp < 0.0 {
                return Err(fail(format!("invalid timestamp {}", e.timestamp)));
            }
            if e.timestamp < last {
                return Err(fail(format!("timestamp {} earlier than previous {last}", e.timestamp)));
            }
            last = e.timestamp;
            if !pitch.accepts(e.ball) {
                return Err(fail("ball position outside pitch bounds".into()));
            }
            match &e.freeze_frame {
                None if e.kind == EventKind::Shot => {
                    return Err(fail("shot events must carry a freeze_frame".into()));
                }
                None => {}
                Some(ff) => {
                    ff.validate(&pitch).map_err(fail)?;
                    if ff.possession != e.team {
                        return Err(fail("freeze_frame possession disagrees with event team".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, DataError> {
        serde_json::to_string_pretty(self).map_err(|e| DataError::Serialize(e.to_string()))
    }
}

/// Parses and validates a match file's contents.
pub fn parse_match(text: &str) -> Result<Match, DataError> {
    let m: Match = serde_json::from_str(text).map_err(|e| DataError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    m.validate()?;
    Ok(m)
}

pub fn load_match(path: impl AsRef<Path>) -> Result<Match, DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| DataError::Io { path: path.display().to_string(), source })?;
    parse_match(&text)
}
