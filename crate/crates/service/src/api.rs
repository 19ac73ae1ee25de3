//! JSON request and response bodies, and the evaluation behind each endpoint.

use keeper_core::config::HeatmapGrid;
use keeper_core::episodes::{flag_event, Episode, EventFlag, FlagColor};
use keeper_core::evaluator::{check_eligible, goal_heatmap, EvalError};
use keeper_core::{best_move, evaluate_position, Config, Event, GameState, GoalPoint, MoveDecision, PitchPoint, PositionEvaluation};
use serde::{Deserialize, Serialize};

/// Largest heatmap a single request may ask for, per side.
pub const MAX_GRID: usize = 64;
/// Longest reaction window a simulate request may ask for, seconds.
pub const MAX_DT: f64 = 10.0;

/// A request that parsed but cannot be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Unprocessable(pub String);

impl From<EvalError> for Unprocessable {
    fn from(e: EvalError) -> Self {
        Unprocessable(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationRequest {
    /// Full placement. `goalkeeper` is the actual keeper.
    pub state: GameState,
    #[serde(default)]
    pub simulated_goalkeeper: Option<PitchPoint>,
    /// Time the keeper has to react, used for the suggested moves.
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub heatmap: Option<HeatmapGrid>,
    /// Overrides the configured shot targets.
    #[serde(default)]
    pub targets: Option<Vec<GoalPoint>>,
}

fn default_dt() -> f64 {
    1.0
}

/// Segment from the ball carrier to a point in the goal mouth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotLine {
    pub from: PitchPoint,
    pub to: GoalPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResponse {
    pub actual: PositionEvaluation,
    pub simulated: Option<PositionEvaluation>,
    /// Least protected target for the actual keeper.
    pub red_line: ShotLine,
    /// Least protected target for the simulated keeper.
    pub green_line: Option<ShotLine>,
    pub suggestion: MoveDecision,
    pub heatmap_grid: HeatmapGrid,
    /// Conceding probability per goal cell for the simulated keeper if given,
    /// otherwise the actual one. Row 0 is under the crossbar.
    pub heatmap: Vec<Vec<f64>>,
}

pub fn simulate(req: &SimulationRequest, base: &Config) -> Result<SimulationResponse, Unprocessable> {
    let mut cfg = base.clone();
    if let Some(t) = &req.targets {
        if t.is_empty() {
            return Err(Unprocessable("targets must not be empty".into()));
        }
        if let Some(bad) = t.iter().find(|p| !cfg.goal.contains(**p)) {
            return Err(Unprocessable(format!("target [{}, {}] lies outside the goal mouth", bad.y, bad.z)));
        }
        cfg.targets.0 = t.clone();
    }
    let grid = req.heatmap.unwrap_or(cfg.heatmap);
    if grid.cols == 0 || grid.rows == 0 || grid.cols > MAX_GRID || grid.rows > MAX_GRID {
        return Err(Unprocessable(format!("heatmap grid must be between 1x1 and {MAX_GRID}x{MAX_GRID}")));
    }
    if !(req.dt.is_finite() && (0.0..=MAX_DT).contains(&req.dt)) {
        return Err(Unprocessable(format!("dt must lie in [0, {MAX_DT}] seconds")));
    }
    req.state.validate(&cfg.pitch).map_err(Unprocessable)?;
    let gk = req.state.goalkeeper.ok_or_else(|| Unprocessable("state.goalkeeper is required".into()))?;
    if let Some(sim) = req.simulated_goalkeeper {
        if !cfg.pitch.accepts(sim) {
            return Err(Unprocessable(format!("simulated goalkeeper [{}, {}] outside pitch bounds", sim.x, sim.y)));
        }
    }
    let shooter = check_eligible(&req.state, &cfg)?;

    let actual = evaluate_position(gk, &req.state, &cfg)?;
    let simulated = req.simulated_goalkeeper.map(|p| evaluate_position(p, &req.state, &cfg)).transpose()?;
    let suggestion = best_move(gk, req.dt, &req.state, &cfg)?;
    let heat_gk = req.simulated_goalkeeper.unwrap_or(gk);
    let heatmap = goal_heatmap(heat_gk, &req.state, grid, &cfg)?;
    Ok(SimulationResponse {
        red_line: ShotLine { from: shooter, to: actual.worst_target },
        green_line: simulated.as_ref().map(|s| ShotLine { from: shooter, to: s.worst_target }),
        actual,
        simulated,
        suggestion,
        heatmap_grid: grid,
        heatmap,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EpisodeDetail {
    #[serde(flatten)]
    pub summary: crate::store::EpisodeSummary,
    pub events: Vec<Event>,
    pub flags: Vec<EventFlag>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Frame {
    pub episode_id: String,
    pub t: f64,
    pub event_index: usize,
    pub event: Event,
    pub flag: EventFlag,
    /// Scores for the keeper's observed position, for green events.
    pub evaluation: Option<PositionEvaluation>,
    /// Model move from the keeper's previous observed position, when known.
    pub suggestion: Option<MoveDecision>,
}

/// The event at or just before `t`, with evaluation for green events.
pub fn frame_at(ep: &Episode, t: f64, cfg: &Config) -> Result<Frame, Unprocessable> {
    if !(t.is_finite() && t >= ep.start && t <= ep.end) {
        return Err(Unprocessable(format!("t = {t} outside episode [{}, {}]", ep.start, ep.end)));
    }
    let (i, _) = ep.event_at(t).expect("t is within the episode");
    frame_for_event(ep, i, t, cfg)
}

/// Frame for the `i`th event of `ep`, reported at time `t`.
pub fn frame_for_event(ep: &Episode, i: usize, t: f64, cfg: &Config) -> Result<Frame, Unprocessable> {
    let e = &ep.events[i];
    let flag = flag_event(e, cfg);
    let (mut evaluation, mut suggestion) = (None, None);
    if flag.color == FlagColor::Green {
        let ff = e.freeze_frame.as_ref().expect("green events carry a freeze frame");
        let gk = ff.goalkeeper.expect("green events show the keeper");
        evaluation = Some(evaluate_position(gk, ff, cfg)?);
        let prev = i.checked_sub(1).map(|j| &ep.events[j]);
        if let Some((p, prev_gk)) = prev.and_then(|p| Some((p, p.freeze_frame.as_ref()?.goalkeeper?))) {
            let d = best_move(prev_gk, e.timestamp - p.timestamp, ff, cfg)?;
            suggestion = Some(d.with_actual(gk, cfg.analysis.stay_threshold));
        }
    }
    Ok(Frame { episode_id: ep.id.clone(), t, event_index: i, event: e.clone(), flag, evaluation, suggestion })
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Page {
    #[serde(default)]
    pub offset: usize,
    #[serde(default = "default_limit")]
    pub limit: usize,
}

pub const MAX_LIMIT: usize = 500;

fn default_limit() -> usize {
    50
}

#[derive(Debug, Clone, Serialize)]
pub struct Paged<T> {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<T>,
}
