//! The minimax position metric and the move search built on it.
//!
//! For a keeper position, every simulated target is scored with
//! `(1 - p_block) * (1 - p_save)` and the position's metric is the worst
//! (largest) of those. The best move is the run-model candidate with the
//! smallest metric.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Config, HeatmapGrid};
use crate::data::{GameState, Team};
use crate::geometry::{GoalPoint, PitchPoint};
use crate::kinematics::{candidate_positions, Direction, KinematicsError};
use crate::probability::{block_features, p_block, p_goal, p_save, save_features, ProbabilityError};

/// Metrics closer than this are treated as tied.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("state not eligible for evaluation: {0}")]
    Ineligible(String),
    #[error("heatmap grid must be at least 1x1")]
    EmptyGrid,
    #[error("no decisions to summarize")]
    NoDecisions,
    #[error("decision {0} has no observed keeper move")]
    MissingActual(usize),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Probability(#[from] ProbabilityError),
}

/// Scores for one simulated shot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotEvaluation {
    pub target: GoalPoint,
    pub p_block: f64,
    pub p_save: f64,
    pub p_goal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionEvaluation {
    pub position: PitchPoint,
    pub shots: Vec<ShotEvaluation>,
    pub per_target_p_goal: Vec<f64>,
    /// Largest entry of `per_target_p_goal`.
    pub metric: f64,
    pub worst_index: usize,
    pub worst_target: GoalPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveDecision {
    pub previous_position: PitchPoint,
    pub dt: f64,
    /// One evaluation per [`Direction::ALL`] entry.
    pub candidates: Vec<PositionEvaluation>,
    pub chosen_index: usize,
    pub chosen_direction: Direction,
    pub actual_position: Option<PitchPoint>,
    pub actual_direction: Option<Direction>,
}

impl MoveDecision {
    pub fn chosen(&self) -> &PositionEvaluation {
        &self.candidates[self.chosen_index]
    }

    pub fn stay(&self) -> &PositionEvaluation {
        &self.candidates[0]
    }

    /// Records where the keeper actually went.
    pub fn with_actual(mut self, actual: PitchPoint, stay_threshold: f64) -> Self {
        self.actual_direction = Some(Direction::classify(self.previous_position, actual, stay_threshold));
        self.actual_position = Some(actual);
        self
    }
}

/// Returns the shooter if the state is one the position model applies to.
pub fn check_eligible(state: &GameState, cfg: &Config) -> Result<PitchPoint, EvalError> {
    if state.possession != Team::Attacking {
        return Err(EvalError::Ineligible("ball is not controlled by the attacking team".into()));
    }
    let shooter = state
        .shooter()
        .ok_or_else(|| EvalError::Ineligible("no ball carrier in the freeze frame".into()))?;
    if !(shooter.x > 0.0 && shooter.x <= cfg.zone_limit()) {
        return Err(EvalError::Ineligible(format!(
            "ball at x = {} is outside the defending zone (0, {}]",
            shooter.x,
            cfg.zone_limit()
        )));
    }
    Ok(shooter)
}

/// Scores a single shot from `shooter` to `target` against a keeper at `gk`.
pub fn evaluate_shot(
    gk: PitchPoint,
    shooter: PitchPoint,
    target: GoalPoint,
    state: &GameState,
    cfg: &Config,
) -> Result<ShotEvaluation, EvalError> {
    let bf = block_features(shooter, target, state, cfg.dive.ball_speed, &cfg.block)?;
    let sf = save_features(gk, shooter, target, state, &cfg.dive, &cfg.goal, cfg.keeper_angle)?;
    let pb = p_block(&bf, &cfg.models.block)?;
    let ps = p_save(&sf, &cfg.models.save)?;
    Ok(ShotEvaluation { target, p_block: pb, p_save: ps, p_goal: p_goal(pb, ps)? })
}

/// Index of the largest value; ties go to the lowest index.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub fn evaluate_position(gk: PitchPoint, state: &GameState, cfg: &Config) -> Result<PositionEvaluation, EvalError> {
    let shooter = check_eligible(state, cfg)?;
    let shots = cfg
        .targets
        .0
        .iter()
        .map(|&t| evaluate_shot(gk, shooter, t, state, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let per_target_p_goal: Vec<f64> = shots.iter().map(|s| s.p_goal).collect();
    let worst_index = argmax(&per_target_p_goal);
    Ok(PositionEvaluation {
        position: gk,
        metric: per_target_p_goal[worst_index],
        worst_target: shots[worst_index].target,
        worst_index,
        per_target_p_goal,
        shots,
    })
}

/// Least protected simulated target for a keeper at `gk`.
pub fn least_protected_target(gk: PitchPoint, state: &GameState, cfg: &Config) -> Result<GoalPoint, EvalError> {
    Ok(evaluate_position(gk, state, cfg)?.worst_target)
}

/// Evaluates the nine run-model candidates and picks the one with the lowest
/// metric. Ties go to the smaller displacement, then to the lower index.
pub fn best_move(prev_gk: PitchPoint, dt: f64, state: &GameState, cfg: &Config) -> Result<MoveDecision, EvalError> {
    let positions = candidate_positions(prev_gk, dt, &cfg.run, &cfg.pitch)?;
    let candidates = positions
        .iter()
        .map(|&p| evaluate_position(p, state, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let mut chosen = 0;
    for i in 1..candidates.len() {
        let (a, b) = (candidates[i].metric, candidates[chosen].metric);
        let better = if (a - b).abs() <= TIE_EPS {
            positions[i].distance(prev_gk) < positions[chosen].distance(prev_gk) - TIE_EPS
        } else {
            a < b
        };
        if better {
            chosen = i;
        }
    }
    Ok(MoveDecision {
        previous_position: prev_gk,
        dt,
        chosen_index: chosen,
        chosen_direction: Direction::ALL[chosen],
        candidates,
        actual_position: None,
        actual_direction: None,
    })
}

/// Conceding probability for a shot to the centre of each cell of the goal
/// mouth. Row 0 is under the crossbar, column 0 next to the right post
/// (negative `y`).
pub fn goal_heatmap(gk: PitchPoint, state: &GameState, grid: HeatmapGrid, cfg: &Config) -> Result<Vec<Vec<f64>>, EvalError> {
    if grid.cols == 0 || grid.rows == 0 {
        return Err(EvalError::EmptyGrid);
    }
    let shooter = check_eligible(state, cfg)?;
    let (w, h) = (cfg.goal.width, cfg.goal.height);
    (0..grid.rows)
        .map(|r| {
            let z = h - (r as f64 + 0.5) * h / grid.rows as f64;
            (0..grid.cols)
                .map(|c| {
                    let y = -w / 2.0 + (c as f64 + 0.5) * w / grid.cols as f64;
                    Ok(evaluate_shot(gk, shooter, GoalPoint::new(y, z), state, cfg)?.p_goal)
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionShare {
    pub direction: Direction,
    pub label: String,
    pub count: usize,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveHistogram {
    pub decisions: usize,
    pub model: Vec<DirectionShare>,
    /// Present when at least one decision carries an observed move.
    pub actual: Option<Vec<DirectionShare>>,
    /// Share of model choices heading toward the goal line.
    pub model_backward_share: f64,
    pub actual_backward_share: Option<f64>,
}

fn shares(dirs: impl Iterator<Item = Direction>) -> Vec<DirectionShare> {
    let mut counts = [0usize; 9];
    for d in dirs {
        counts[d.index()] += 1;
    }
    let total: usize = counts.iter().sum();
    Direction::ALL
        .iter()
        .map(|&d| DirectionShare {
            direction: d,
            label: d.label().to_string(),
            count: counts[d.index()],
            frequency: if total == 0 { 0.0 } else { counts[d.index()] as f64 / total as f64 },
        })
        .collect()
}

fn backward_share(s: &[DirectionShare]) -> f64 {
    s.iter().filter(|d| d.direction.is_backward()).map(|d| d.frequency).sum()
}

pub fn move_distribution(decisions: &[MoveDecision]) -> Result<MoveHistogram, EvalError> {
    if decisions.is_empty() {
        return Err(EvalError::NoDecisions);
    }
    let model = shares(decisions.iter().map(|d| d.chosen_direction));
    let actual = if decisions.iter().any(|d| d.actual_direction.is_some()) {
        Some(shares(decisions.iter().filter_map(|d| d.actual_direction)))
    } else {
        None
    };
    Ok(MoveHistogram {
        decisions: decisions.len(),
        model_backward_share: backward_share(&model),
        actual_backward_share: actual.as_deref().map(backward_share),
        model,
        actual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionComparison {
    pub direction: Direction,
    pub label: String,
    pub model: f64,
    pub actual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub rows: Vec<DirectionComparison>,
    pub total_variation: f64,
}

/// Total-variation distance between two distributions over the nine moves.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn compare_model_vs_actual(decisions: &[MoveDecision]) -> Result<DivergenceReport, EvalError> {
    if decisions.is_empty() {
        return Err(EvalError::NoDecisions);
    }
    if let Some(i) = decisions.iter().position(|d| d.actual_direction.is_none()) {
        return Err(EvalError::MissingActual(i));
    }
    let hist = move_distribution(decisions)?;
    let actual = hist.actual.expect("all decisions carry actual moves");
    let rows: Vec<DirectionComparison> = hist
        .model
        .iter()
        .zip(&actual)
        .map(|(m, a)| DirectionComparison {
            direction: m.direction,
            label: m.label.clone(),
            model: m.frequency,
            actual: a.frequency,
        })
        .collect();
    let p: Vec<f64> = rows.iter().map(|r| r.model).collect();
    let q: Vec<f64> = rows.iter().map(|r| r.actual).collect();
    Ok(DivergenceReport { total_variation: total_variation(&p, &q), rows })
}
