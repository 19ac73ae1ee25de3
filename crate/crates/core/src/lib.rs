//! Goalkeeper positioning engine.
//!
//! Scores a keeper's position against simulated shots: shadow geometry feeds
//! block and save models, each shot's conceding probability is
//! `(1 - p_block) * (1 - p_save)`, and a position is only as good as its
//! worst shot. On top of that sit the run-model move search, analytics over
//! many decisions, and the match data layer.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::should_implement_trait)]

pub mod analysis;
pub mod config;
pub mod data;
pub mod episodes;
pub mod evaluator;
pub mod geometry;
pub mod kinematics;
pub mod pitch;
pub mod probability;
pub mod shadows;
pub mod synthetic;

pub use config::Config;
pub use data::{Event, EventKind, GameState, Match, Team};
pub use evaluator::{best_move, evaluate_position, MoveDecision, PositionEvaluation};
pub use geometry::{GoalPoint, PitchPoint};
