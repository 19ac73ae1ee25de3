//! Pitch and goal dimensions.

use serde::{Deserialize, Serialize};

use crate::geometry::{GoalPoint, PitchPoint, RectYZ, Triangle2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PitchConfig {
    pub length: f64,
    pub width: f64,
    /// Slack around the field lines within which positions are still accepted.
    pub margin: f64,
}

impl Default for PitchConfig {
    fn default() -> Self {
        Self { length: 105.0, width: 68.0, margin: 5.0 }
    }
}

impl PitchConfig {
    /// Whether `p` is finite and inside the field plus margin.
    pub fn accepts(&self, p: PitchPoint) -> bool {
        p.is_finite()
            && p.x >= -self.margin
            && p.x <= self.length + self.margin
            && p.y.abs() <= self.width / 2.0 + self.margin
    }

    /// Clamps onto the field proper (no margin).
    pub fn clamp_to_field(&self, p: PitchPoint) -> PitchPoint {
        let hw = self.width / 2.0;
        PitchPoint::new(p.x.clamp(0.0, self.length), p.y.clamp(-hw, hw))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoalConfig {
    pub width: f64,
    pub height: f64,
}

impl Default for GoalConfig {
    fn default() -> Self {
        Self { width: 7.32, height: 2.44 }
    }
}

impl GoalConfig {
    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    /// Post at negative `y`.
    pub fn right_post(&self) -> PitchPoint {
        PitchPoint::new(0.0, -self.half_width())
    }

    /// Post at positive `y`.
    pub fn left_post(&self) -> PitchPoint {
        PitchPoint::new(0.0, self.half_width())
    }

    pub fn center(&self) -> PitchPoint {
        PitchPoint::new(0.0, 0.0)
    }

    pub fn mouth(&self) -> RectYZ {
        RectYZ::new(-self.half_width(), self.half_width(), 0.0, self.height)
    }

    pub fn contains(&self, p: GoalPoint) -> bool {
        p.y.abs() <= self.half_width() + 1e-12 && p.z >= 0.0 && p.z <= self.height + 1e-12
    }

    /// Triangle spanned by `apex` and the two posts.
    pub fn triangle_to(&self, apex: PitchPoint) -> Triangle2 {
        Triangle2::new(apex, self.right_post(), self.left_post())
    }
}
