//! Position, goal and dive shadows.
//!
//! With `A` the keeper, `O` the shooter and `B`, `C` the right and left posts:
//!
//! * position shadow: `S(ABC ∩ OBC) / S(OBC)`
//! * goal shadow: share of the goal mouth covered by the keeper's dive rectangle
//! * dive shadow: `S(circle(A, |AD|) ∩ OBC) / S(OBC)`, where `D` is the foot of the
//!   perpendicular from `A` onto the shot line and the radius is capped by the
//!   dive reach.
//!
//! The dive circle is not clipped to the half plane in front of the goal line.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    circle_poly_intersection_area, convex_poly_intersection_area, foot_of_perpendicular,
    rect_intersection_area, triangle_area, Circle2, GeometryError, GoalPoint, PitchPoint,
};
use crate::kinematics::{dive_rect, dive_reach, DiveModelParams, KinematicsError, ReachBudget};
use crate::pitch::GoalConfig;

/// Ratios above 1 by less than this are rounding noise.
const RATIO_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShadowError {
    #[error("shooter must be strictly in front of the goal plane (x = {0})")]
    ShooterBehindGoal(f64),
    #[error("shooter is collinear with the posts; the shooting triangle has no area")]
    DegenerateShotTriangle,
    #[error("target {0:?} is outside the goal mouth")]
    TargetOutsideGoal(GoalPoint),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ShadowSet {
    pub position_shadow: f64,
    pub goal_shadow: f64,
    pub dive_shadow: f64,
}

fn clamp_ratio(r: f64) -> f64 {
    debug_assert!(r <= 1.0 + RATIO_SLACK, "shadow ratio {r} exceeds 1");
    r.clamp(0.0, 1.0)
}

/// Area of the shooter's triangle to the posts, rejecting degenerate setups.
fn shot_triangle_area(shooter: PitchPoint, goal: &GoalConfig) -> Result<f64, ShadowError> {
    if !shooter.is_finite() {
        return Err(GeometryError::NonFinite.into());
    }
    if !(shooter.x > 0.0) {
        return Err(ShadowError::ShooterBehindGoal(shooter.x));
    }
    let area = triangle_area(&goal.triangle_to(shooter));
    if area <= 0.0 {
        return Err(ShadowError::DegenerateShotTriangle);
    }
    Ok(area)
}

pub fn position_shadow(
    gk: PitchPoint,
    shooter: PitchPoint,
    goal: &GoalConfig,
) -> Result<f64, ShadowError> {
    let obc_area = shot_triangle_area(shooter, goal)?;
    let abc = goal.triangle_to(gk);
    let obc = goal.triangle_to(shooter);
    let shared = convex_poly_intersection_area(abc.vertices(), obc.vertices())?;
    Ok(clamp_ratio(shared / obc_area))
}

/// Share of the goal mouth covered by the keeper's dive rectangle.
///
/// A keeper level with or beyond the shooter has no projection onto the goal
/// and covers none of it.
pub fn goal_shadow(
    gk: PitchPoint,
    shooter: PitchPoint,
    dive: &DiveModelParams,
    goal: &GoalConfig,
) -> Result<f64, ShadowError> {
    if !(shooter.x > 0.0) {
        return Err(ShadowError::ShooterBehindGoal(shooter.x));
    }
    let rect = match dive_rect(gk, shooter, dive) {
        Ok(r) => r,
        Err(KinematicsError::DegenerateProjection) => return Ok(0.0),
        Err(e) => return Err(e.into()),
    };
    let mouth = goal.mouth();
    Ok(clamp_ratio(rect_intersection_area(&rect, &mouth) / mouth.area()))
}

/// Radius of the dive circle: distance to the shot line, capped by the reach.
pub fn dive_radius(
    gk: PitchPoint,
    shooter: PitchPoint,
    target: GoalPoint,
    dive: &DiveModelParams,
) -> Result<f64, ShadowError> {
    let foot = foot_of_perpendicular(gk, (shooter, target.footprint()))?;
    let budget = match dive.shadow_budget {
        ReachBudget::MaxDiveTime => dive.max_dive_time,
        ReachBudget::FlightTime => dive.flight_time(shooter),
    };
    Ok(gk.distance(foot).min(dive_reach(budget, dive)))
}

pub fn dive_shadow(
    gk: PitchPoint,
    shooter: PitchPoint,
    target: GoalPoint,
    dive: &DiveModelParams,
    goal: &GoalConfig,
) -> Result<f64, ShadowError> {
    let obc_area = shot_triangle_area(shooter, goal)?;
    if !goal.contains(target) {
        return Err(ShadowError::TargetOutsideGoal(target));
    }
    let radius = dive_radius(gk, shooter, target, dive)?;
    let obc = goal.triangle_to(shooter);
    let covered = circle_poly_intersection_area(&Circle2::new(gk, radius), obc.vertices())?;
    Ok(clamp_ratio(covered / obc_area))
}

pub fn shadow_set(
    gk: PitchPoint,
    shooter: PitchPoint,
    target: GoalPoint,
    dive: &DiveModelParams,
    goal: &GoalConfig,
) -> Result<ShadowSet, ShadowError> {
    Ok(ShadowSet {
        position_shadow: position_shadow(gk, shooter, goal)?,
        goal_shadow: goal_shadow(gk, shooter, dive, goal)?,
        dive_shadow: dive_shadow(gk, shooter, target, dive, goal)?,
    })
}
