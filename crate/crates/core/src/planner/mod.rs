//! Goal-driven exploration of a gridworld.
//!
//! The system (Opponent) moves on a grid; after every move the environment
//! (Proponent) reveals more features of the objects within the visibility
//! horizon. Discovered objects are goals in a goal lattice with a phase
//! structure, and parallel goal sets are ranked by `a ⊸ b_1 × ... × b_k`.
//! Plays are chosen to maximize the joined rewards along them, and the
//! active goal set shrinks whenever its images stop improving.

mod cognition;
mod play;
mod scenario;
mod select;

use thiserror::Error;

use crate::conway::GameError;
use crate::phase::PhaseError;

pub use cognition::{
    images_monotone, run_cognition, Actor, Candidate, CognitionOptions, Decision, Trace, TraceHeader, TraceStep,
};
pub use play::{
    build_compound_game, freedom, plan_play, revealed, visible_rewards, CompoundGame, Mode, Plan, PlanOptions,
    ProductValue, FREEDOM_TOP,
};
pub use scenario::{load_scenario, Cell, Dir, Object, ObjectDoc, Scenario, ScenarioDoc, MAX_FEATURES};
pub use select::{eval_priority, select_among, select_goal_sets, GoalProcessSet, Selection, TieBreak, MAX_DISCOVERED};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("bad object: {0}")]
    BadObject(String),
    #[error("`{0}` is not a goal element (a generator, or a generator joined with the free-move goal)")]
    UnknownGoalElement(String),
    #[error("goal phase failed to load: {0}")]
    PhaseLoadFailure(String),
    #[error("no legal move inside the horizon")]
    HorizonEmpty,
    #[error("no goals to select from")]
    NoGoals,
    #[error("{0} discovered objects; at most {MAX_DISCOVERED} can be ranked")]
    TooManyGoals(usize),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Game(GameError),
}
