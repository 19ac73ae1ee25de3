//! Block and save models.
//!
//! Both are linear-logistic classifiers over a fixed, named feature schema.
//! Weights come from the configuration, from a weights file, or from
//! [`fit_logistic`]. A shot scores with `(1 - p_block) * (1 - p_save)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::GameState;
use crate::geometry::{closest_point_on_segment, GoalPoint, PitchPoint};
use crate::kinematics::DiveModelParams;
use crate::pitch::GoalConfig;
use crate::shadows::{shadow_set, ShadowError, ShadowSet};

/// Stand-in for "no defender can reach the shot line in time".
pub const NO_INTERCEPT_MARGIN: f64 = 99.0;

/// Logits are clamped to this magnitude so predictions stay strictly inside (0, 1).
const MAX_LOGIT: f64 = 30.0;

pub const BLOCK_FEATURES: [&str; 3] = ["corridor_density", "min_time_margin", "n_defenders_in_corridor"];

pub const SAVE_FEATURES: [&str; 7] = [
    "position_shadow",
    "goal_shadow",
    "dive_shadow",
    "shot_distance",
    "shot_angle",
    "gk_shooter_angle",
    "under_pressure",
];

const BIAS_KEY: &str = "__bias__";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbabilityError {
    #[error("model has {model} weights but {features} features were supplied")]
    DimensionMismatch { model: usize, features: usize },
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("training set needs both classes")]
    SingleClass,
    #[error("training set is empty or ragged")]
    BadDataset,
    #[error("non-finite feature value in row {0}")]
    NonFinite(usize),
    #[error("weights file line {line}: {message}")]
    WeightsFile { line: usize, message: String },
    #[error("feature schema mismatch: expected {expected:?}, found {found:?}")]
    Schema { expected: Vec<String>, found: Vec<String> },
    #[error("shooter must be in front of the goal plane (x = {0})")]
    ShooterBehindGoal(f64),
    #[error(transparent)]
    Shadow(#[from] ShadowError),
}

/// Parameters of the block-feature extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlockParams {
    /// Half-width of the shot corridor, m.
    pub corridor_half_width: f64,
    /// Defender running speed, m/s.
    pub defender_speed: f64,
}

impl Default for BlockParams {
    fn default() -> Self {
        Self { corridor_half_width: 0.5, defender_speed: 6.0 }
    }
}

/// Which angle is reported as `gk_shooter_angle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeeperAngleMode {
    /// Angle at the shooter between the keeper and the goal centre.
    #[default]
    GoalCenter,
    /// Angle at the shooter between the keeper and the shot target.
    ShotLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockFeatures {
    pub corridor_density: f64,
    /// Fastest defender's arrival at the shot line minus the ball's, in seconds.
    /// Negative means the defender gets there first.
    pub min_time_margin: f64,
    pub n_defenders_in_corridor: usize,
}

impl BlockFeatures {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.corridor_density, self.min_time_margin, self.n_defenders_in_corridor as f64]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaveFeatures {
    pub shadows: ShadowSet,
    pub shot_distance: f64,
    pub shot_angle: f64,
    pub gk_shooter_angle: f64,
    pub under_pressure: bool,
}

impl SaveFeatures {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.shadows.position_shadow,
            self.shadows.goal_shadow,
            self.shadows.dive_shadow,
            self.shot_distance,
            self.shot_angle,
            self.gk_shooter_angle,
            if self.under_pressure { 1.0 } else { 0.0 },
        ]
    }
}

/// Corridor occupancy and interception timing for a straight shot from
/// `shooter` to the footprint of `target`.
pub fn block_features(
    shooter: PitchPoint,
    target: GoalPoint,
    state: &GameState,
    ball_speed: f64,
    params: &BlockParams,
) -> Result<BlockFeatures, ProbabilityError> {
    if !(shooter.x > 0.0) {
        return Err(ProbabilityError::ShooterBehindGoal(shooter.x));
    }
    let end = target.footprint();
    let length = shooter.distance(end);
    let mut inside = 0usize;
    let mut margin = NO_INTERCEPT_MARGIN;
    for &d in &state.defenders {
        let p = closest_point_on_segment(d, shooter, end);
        let gap = d.distance(p);
        if gap <= params.corridor_half_width {
            inside += 1;
        }
        let defender_time = gap / params.defender_speed;
        let ball_time = shooter.distance(p) / ball_speed;
        margin = margin.min(defender_time - ball_time);
    }
    Ok(BlockFeatures {
        corridor_density: inside as f64 / length,
        min_time_margin: margin.clamp(-NO_INTERCEPT_MARGIN, NO_INTERCEPT_MARGIN),
        n_defenders_in_corridor: inside,
    })
}

/// Unsigned angle at `at` between the directions to `a` and `b`; zero when
/// either direction is undefined.
fn angle_between(at: PitchPoint, a: PitchPoint, b: PitchPoint) -> f64 {
    let (u, v) = (a.sub(at), b.sub(at));
    if u.norm() == 0.0 || v.norm() == 0.0 {
        return 0.0;
    }
    u.cross(v).abs().atan2(u.dot(v))
}

#[allow(clippy::too_many_arguments)]
pub fn save_features(
    gk: PitchPoint,
    shooter: PitchPoint,
    target: GoalPoint,
    state: &GameState,
    dive: &DiveModelParams,
    goal: &GoalConfig,
    angle_mode: KeeperAngleMode,
) -> Result<SaveFeatures, ProbabilityError> {
    let shadows = shadow_set(gk, shooter, target, dive, goal)?;
    let reference = match angle_mode {
        KeeperAngleMode::GoalCenter => goal.center(),
        KeeperAngleMode::ShotLine => target.footprint(),
    };
    Ok(SaveFeatures {
        shadows,
        shot_distance: shooter.distance(goal.center()),
        shot_angle: angle_between(shooter, goal.right_post(), goal.left_post()),
        gk_shooter_angle: angle_between(shooter, gk, reference),
        under_pressure: state.under_pressure,
    })
}

pub fn logistic(z: f64) -> f64 {
    let z = z.clamp(-MAX_LOGIT, MAX_LOGIT);
    1.0 / (1.0 + (-z).exp())
}

/// Linear-logistic classifier over named features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilityModel {
    pub feature_names: Vec<String>,
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl ProbabilityModel {
    pub fn new(feature_names: &[&str], weights: Vec<f64>, bias: f64) -> Self {
        Self { feature_names: feature_names.iter().map(|s| s.to_string()).collect(), weights, bias }
    }

    pub fn zeros(feature_names: &[&str]) -> Self {
        Self::new(feature_names, vec![0.0; feature_names.len()], 0.0)
    }

    /// Default block model, tuned on the seeded synthetic corpus.
    pub fn default_block() -> Self {
        Self::new(&BLOCK_FEATURES, vec![0.6, -2.5, 2.2], -3.6)
    }

    /// Default save model, tuned on the seeded synthetic corpus.
    pub fn default_save() -> Self {
        Self::new(&SAVE_FEATURES, vec![0.2, 0.3, 8.0, -0.06, 0.5, -0.8, -0.3], -1.2)
    }

    pub fn logit(&self, features: &[f64]) -> Result<f64, ProbabilityError> {
        if features.len() != self.weights.len() {
            return Err(ProbabilityError::DimensionMismatch {
                model: self.weights.len(),
                features: features.len(),
            });
        }
        Ok(self.bias + self.weights.iter().zip(features).map(|(w, x)| w * x).sum::<f64>())
    }

    pub fn predict(&self, features: &[f64]) -> Result<f64, ProbabilityError> {
        self.logit(features).map(logistic)
    }

    /// Checks that the model's features are exactly `expected`, in order.
    pub fn check_schema(&self, expected: &[&str]) -> Result<(), ProbabilityError> {
        if self.weights.len() != self.feature_names.len() || self.feature_names.iter().ne(expected.iter()) {
            return Err(ProbabilityError::Schema {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.feature_names.clone(),
            });
        }
        Ok(())
    }

    /// Serializes as `name<TAB>weight` lines followed by the bias line.
    pub fn export_weights(&self) -> String {
        let mut out = String::new();
        for (name, w) in self.feature_names.iter().zip(&self.weights) {
            let _ = writeln!(out, "{name}\t{w:?}");
        }
        let _ = writeln!(out, "{BIAS_KEY}\t{:?}", self.bias);
        out
    }
}

pub fn p_block(f: &BlockFeatures, m: &ProbabilityModel) -> Result<f64, ProbabilityError> {
    m.predict(&f.to_vec())
}

pub fn p_save(f: &SaveFeatures, m: &ProbabilityModel) -> Result<f64, ProbabilityError> {
    m.predict(&f.to_vec())
}

/// Probability that an on-target shot ends in a goal.
pub fn p_goal(p_blocked: f64, p_saved_given_not_blocked: f64) -> Result<f64, ProbabilityError> {
    for p in [p_blocked, p_saved_given_not_blocked] {
        if !(0.0..=1.0).contains(&p) {
            return Err(ProbabilityError::OutOfRange(p));
        }
    }
    Ok((1.0 - p_blocked) * (1.0 - p_saved_given_not_blocked))
}

/// Parses a weights file and checks it against `expected` feature names.
pub fn import_model(text: &str, expected: &[&str]) -> Result<ProbabilityModel, ProbabilityError> {
    let mut names = Vec::new();
    let mut weights = Vec::new();
    let mut bias = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fail = |message: String| ProbabilityError::WeightsFile { line, message };
        if raw.trim().is_empty() {
            continue;
        }
        if bias.is_some() {
            return Err(fail("content after the bias line".into()));
        }
        let (name, value) = raw.split_once('\t').ok_or_else(|| fail("expected name<TAB>value".into()))?;
        let value: f64 = value.trim().parse().map_err(|_| fail(format!("invalid number {value:?}")))?;
        if !value.is_finite() {
            return Err(fail("non-finite weight".into()));
        }
        if name == BIAS_KEY {
            bias = Some(value);
        } else {
            names.push(name.to_string());
            weights.push(value);
        }
    }
    let bias = bias.ok_or(ProbabilityError::WeightsFile {
        line: text.lines().count(),
        message: format!("missing final {BIAS_KEY} line"),
    })?;
    let model = ProbabilityModel { feature_names: names, weights, bias };
    model.check_schema(expected)?;
    Ok(model)
}

/// Mean negative log-likelihood of a logistic model over a labelled dataset.
pub struct LogisticLoss<'a> {
    rows: &'a [Vec<f64>],
    labels: &'a [bool],
}

impl<'a> LogisticLoss<'a> {
    pub fn new(rows: &'a [Vec<f64>], labels: &'a [bool]) -> Result<Self, ProbabilityError> {
        if rows.is_empty() || rows.len() != labels.len() {
            return Err(ProbabilityError::BadDataset);
        }
        let dim = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(ProbabilityError::BadDataset);
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(ProbabilityError::NonFinite(i));
            }
        }
        Ok(Self { rows, labels })
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    fn z(weights: &[f64], bias: f64, row: &[f64]) -> f64 {
        bias + weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>()
    }

    pub fn loss(&self, weights: &[f64], bias: f64) -> f64 {
        let total: f64 = self
            .rows
            .iter()
            .zip(self.labels)
            .map(|(r, &y)| {
                let z = Self::z(weights, bias, r);
                // log(1 + e^z) - y z, written to avoid overflow.
                let softplus = if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
                softplus - if y { z } else { 0.0 }
            })
            .sum();
        total / self.rows.len() as f64
    }

    /// Gradient of [`Self::loss`]: weights first, bias last.
    pub fn gradient(&self, weights: &[f64], bias: f64) -> Vec<f64> {
        let mut g = vec![0.0; self.dim() + 1];
        for (r, &y) in self.rows.iter().zip(self.labels) {
            let z = Self::z(weights, bias, r);
            let p = 1.0 / (1.0 + (-z).exp());
            let err = p - if y { 1.0 } else { 0.0 };
            for (gj, x) in g.iter_mut().zip(r) {
                *gj += err * x;
            }
            g[self.dim()] += err;
        }
        let n = self.rows.len() as f64;
        g.iter_mut().for_each(|v| *v /= n);
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub iterations: usize,
    pub checkpoint_every: usize,
    /// Stop once every gradient component falls below this.
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { iterations: 20_000, checkpoint_every: 100, tolerance: 1e-9 }
    }
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub model: ProbabilityModel,
    /// Training loss at iteration 0 and at every checkpoint.
    pub loss_history: Vec<f64>,
    pub iterations: usize,
}

/// Maximum-likelihood logistic weights by full-batch gradient descent.
///
/// Features are standardized internally and the step is `1/L` for the loss's
/// Lipschitz bound `L = max‖x‖²/4`, so every step decreases the loss. The
/// procedure has no random component; results depend only on the data and
/// `opts`.
pub fn fit_logistic(
    feature_names: &[&str],
    rows: &[Vec<f64>],
    labels: &[bool],
    opts: &FitOptions,
) -> Result<FitReport, ProbabilityError> {
    LogisticLoss::new(rows, labels)?;
    let dim = rows[0].len();
    if dim != feature_names.len() {
        return Err(ProbabilityError::DimensionMismatch { model: feature_names.len(), features: dim });
    }
    let positives = labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == labels.len() {
        return Err(ProbabilityError::SingleClass);
    }

    let n = rows.len() as f64;
    let mean: Vec<f64> = (0..dim).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let scale: Vec<f64> = (0..dim)
        .map(|j| {
            let var = rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n;
            if var > 0.0 { var.sqrt() } else { 1.0 }
        })
        .collect();
    let standardized: Vec<Vec<f64>> =
        rows.iter().map(|r| (0..dim).map(|j| (r[j] - mean[j]) / scale[j]).collect()).collect();
    let loss = LogisticLoss::new(&standardized, labels)?;
    let lipschitz = standardized.iter().map(|r| 1.0 + r.iter().map(|v| v * v).sum::<f64>()).fold(0.0, f64::max) / 4.0;
    let step = 1.0 / lipschitz;

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut history = vec![loss.loss(&w, b)];
    let mut done = 0;
    for it in 1..=opts.iterations {
        let g = loss.gradient(&w, b);
        if g.iter().all(|v| v.abs() < opts.tolerance) {
            break;
        }
        for (wj, gj) in w.iter_mut().zip(&g) {
            *wj -= step * gj;
        }
        b -= step * g[dim];
        done = it;
        if opts.checkpoint_every > 0 && it % opts.checkpoint_every == 0 {
            history.push(loss.loss(&w, b));
        }
    }
    if history.len() == 1 || done % opts.checkpoint_every.max(1) != 0 {
        history.push(loss.loss(&w, b));
    }

    // Undo the standardization: w_raw = w / s, b_raw = b - sum(w_raw * mean).
    let raw_w: Vec<f64> = w.iter().zip(&scale).map(|(wj, s)| wj / s).collect();
    let raw_b = b - raw_w.iter().zip(&mean).map(|(wj, m)| wj * m).sum::<f64>();
    Ok(FitReport {
        model: ProbabilityModel::new(feature_names, raw_w, raw_b),
        loss_history: history,
        iterations: done,
    })
}
