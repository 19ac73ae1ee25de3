//! Run model (where the keeper could have been) and dive model (what the
//! keeper can reach once the ball is struck).

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{PitchPoint, RectYZ};
use crate::pitch::PitchConfig;

/// Half-width limit for the dive rectangle, far outside any goal.
const MAX_RECT_HALF_SPAN: f64 = 100.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("time difference must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("shooter must be in front of the goal plane (x = {0})")]
    ShooterBehindGoal(f64),
    #[error("goalkeeper is behind the goal plane (x = {0})")]
    KeeperBehindGoal(f64),
    #[error("goalkeeper is level with or beyond the shooter; no projection onto the goal")]
    DegenerateProjection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunModelParams {
    /// m/s
    pub run_speed: f64,
    /// m
    pub radius_cap: f64,
}

impl Default for RunModelParams {
    fn default() -> Self {
        Self { run_speed: 5.0, radius_cap: 10.0 }
    }
}

/// How the keeper's position is carried onto the goal plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMode {
    /// Ray from the shooter through the keeper.
    #[default]
    Central,
    /// Straight back along `x`.
    Orthogonal,
}

/// Time budget used to cap the dive-shadow circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReachBudget {
    #[default]
    MaxDiveTime,
    FlightTime,
}

/// Dive model constants. `jump_time` is kept for completeness; the rectangle
/// model folds the jump into `vertical_bonus` and does not use it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiveModelParams {
    pub reaction_time: f64,
    pub jump_time: f64,
    pub max_dive_time: f64,
    pub keeper_height: f64,
    pub vertical_bonus: f64,
    pub dive_speed: f64,
    pub arm_reach: f64,
    pub ball_speed: f64,
    pub projection: ProjectionMode,
    pub shadow_budget: ReachBudget,
}

impl Default for DiveModelParams {
    fn default() -> Self {
        Self {
            reaction_time: 0.2,
            jump_time: 0.5,
            max_dive_time: 1.2,
            keeper_height: 1.90,
            vertical_bonus: 0.5,
            dive_speed: 3.0,
            arm_reach: 1.0,
            ball_speed: 24.0,
            projection: ProjectionMode::Central,
            shadow_budget: ReachBudget::MaxDiveTime,
        }
    }
}

impl DiveModelParams {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("reaction_time", self.reaction_time),
            ("jump_time", self.jump_time),
            ("max_dive_time", self.max_dive_time),
            ("keeper_height", self.keeper_height),
            ("vertical_bonus", self.vertical_bonus),
            ("dive_speed", self.dive_speed),
            ("arm_reach", self.arm_reach),
            ("ball_speed", self.ball_speed),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("dive.{name} must be positive, got {v}"));
            }
        }
        if self.reaction_time >= self.max_dive_time {
            return Err("dive.reaction_time must be below dive.max_dive_time".into());
        }
        Ok(())
    }

    /// Top edge of the dive rectangle.
    pub fn jump_height(&self) -> f64 {
        self.keeper_height + self.vertical_bonus
    }

    /// Ball flight time from `shooter` to the goal plane.
    pub fn flight_time(&self, shooter: PitchPoint) -> f64 {
        shooter.x.max(0.0) / self.ball_speed
    }
}

impl RunModelParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.run_speed.is_finite() && self.run_speed > 0.0) {
            return Err(format!("run.run_speed must be positive, got {}", self.run_speed));
        }
        if !(self.radius_cap.is_finite() && self.radius_cap > 0.0) {
            return Err(format!("run.radius_cap must be positive, got {}", self.radius_cap));
        }
        Ok(())
    }
}

pub fn run_radius(dt: f64, p: &RunModelParams) -> Result<f64, KinematicsError> {
    if dt.is_nan() || dt < 0.0 {
        return Err(KinematicsError::NegativeTime(dt));
    }
    Ok((p.run_speed * dt).min(p.radius_cap))
}

/// One of the nine run-model moves: stay, or one of eight pitch-aligned headings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Stay,
    /// Heading `k * pi/4`, `k` in `0..8`.
    Angle(u8),
}

impl Direction {
    pub const ALL: [Direction; 9] = [
        Direction::Stay,
        Direction::Angle(0),
        Direction::Angle(1),
        Direction::Angle(2),
        Direction::Angle(3),
        Direction::Angle(4),
        Direction::Angle(5),
        Direction::Angle(6),
        Direction::Angle(7),
    ];

    /// Position in [`Direction::ALL`] (and in the candidate list).
    pub fn index(self) -> usize {
        match self {
            Direction::Stay => 0,
            Direction::Angle(k) => k as usize + 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn unit(self) -> PitchPoint {
        match self {
            Direction::Stay => PitchPoint::new(0.0, 0.0),
            Direction::Angle(k) => {
                let th = f64::from(k) * FRAC_PI_4;
                PitchPoint::new(th.cos(), th.sin())
            }
        }
    }

    /// Image under `y -> -y`.
    pub fn mirrored(self) -> Self {
        match self {
            Direction::Stay => Direction::Stay,
            Direction::Angle(k) => Direction::Angle((8 - k) % 8),
        }
    }

    /// Whether the heading has a component toward the goal line (`x` decreasing).
    pub fn is_backward(self) -> bool {
        matches!(self, Direction::Angle(3..=5))
    }

    /// Whether the heading has a component away from the goal line.
    pub fn is_forward(self) -> bool {
        matches!(self, Direction::Angle(0 | 1 | 7))
    }

    /// Snaps an observed displacement onto the nearest of the nine moves;
    /// anything shorter than `stay_threshold` counts as staying.
    pub fn classify(from: PitchPoint, to: PitchPoint, stay_threshold: f64) -> Self {
        let d = to.sub(from);
        if d.norm() < stay_threshold {
            return Direction::Stay;
        }
        let k = (d.y.atan2(d.x) / FRAC_PI_4).round().rem_euclid(8.0);
        Direction::Angle(k as u8)
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Stay => "stay",
            Direction::Angle(0) => "forward",
            Direction::Angle(1) => "forward-left",
            Direction::Angle(2) => "left",
            Direction::Angle(3) => "back-left",
            Direction::Angle(4) => "back",
            Direction::Angle(5) => "back-right",
            Direction::Angle(6) => "right",
            Direction::Angle(_) => "forward-right",
        }
    }
}

/// The stay position followed by the eight run targets, in [`Direction::ALL`] order.
/// Targets are clamped onto the field.
pub fn candidate_positions(
    prev: PitchPoint,
    dt: f64,
    p: &RunModelParams,
    pitch: &PitchConfig,
) -> Result<[PitchPoint; 9], KinematicsError> {
    let r = run_radius(dt, p)?;
    Ok(Direction::ALL.map(|d| match d {
        Direction::Stay => prev,
        _ => pitch.clamp_to_field(prev.add(d.unit().scale(r))),
    }))
}

/// Distance the keeper can cover with hands in `time_available` seconds.
pub fn dive_reach(time_available: f64, p: &DiveModelParams) -> f64 {
    let t = time_available.max(0.0).min(p.max_dive_time);
    p.arm_reach + p.dive_speed * (t - p.reaction_time).max(0.0)
}

/// Reach rectangle of the keeper, carried onto the goal plane.
///
/// Height spans the ground up to `keeper_height + vertical_bonus`. The width
/// is centred where the keeper projects onto the goal plane and scaled by the
/// projection ratio, so a keeper further from goal covers more of it.
pub fn dive_rect(
    gk: PitchPoint,
    shooter: PitchPoint,
    p: &DiveModelParams,
) -> Result<RectYZ, KinematicsError> {
    if !(shooter.x > 0.0) {
        return Err(KinematicsError::ShooterBehindGoal(shooter.x));
    }
    if gk.x < 0.0 {
        return Err(KinematicsError::KeeperBehindGoal(gk.x));
    }
    let reach = dive_reach(p.flight_time(shooter), p);
    let (center, ratio) = match p.projection {
        ProjectionMode::Orthogonal => (gk.y, 1.0),
        ProjectionMode::Central => {
            let depth_gap = shooter.x - gk.x;
            if depth_gap <= 0.0 {
                return Err(KinematicsError::DegenerateProjection);
            }
            let ratio = shooter.x / depth_gap;
            (shooter.y + (gk.y - shooter.y) * ratio, ratio)
        }
    };
    let lo = (center - reach * ratio).clamp(-MAX_RECT_HALF_SPAN, MAX_RECT_HALF_SPAN);
    let hi = (center + reach * ratio).clamp(-MAX_RECT_HALF_SPAN, MAX_RECT_HALF_SPAN);
    Ok(RectYZ::new(lo, hi, 0.0, p.jump_height()))
}
