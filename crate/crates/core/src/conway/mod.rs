//! Conway games with polarized moves, strategies and lattice payoffs.
//!
//! `⅋` is identified with `⊗` on underlying graphs, so `X ⊸ Y` is the graph
//! `X^⊥ ⊗ Y`. Conway games form a compact closed category, which licenses
//! the identification.

mod game;
mod payoff;
pub mod random;
mod strategy;

use thiserror::Error;

use crate::lattice::LatticeError;

pub use game::{dual_game, implication_game, is_isomorphism, tensor_game, Game, GameDoc, Move, Polarity, Shape, Side};
pub use payoff::{is_winning, payoff_dual, payoff_implication, payoff_tensor, DualPayoff, PayoffGame};
pub use strategy::{compose_strategies, copycat, copycat_with_depth, validate_strategy, Clause, Strategy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("vertex `{0}` is not reachable from the root")]
    Unreachable(String),
    #[error("invalid strategy ({clause}): play {play:?}")]
    InvalidStrategy { clause: Clause, play: Vec<usize> },
    #[error("the middle components of the two games differ")]
    ComponentMismatch,
    #[error("game is not an implication X ⊸ Y")]
    NotAnImplication,
    #[error("payoff games use different lattices")]
    LatticeMismatch,
    #[error("interaction exceeded {cap} consecutive hidden moves")]
    StepCapExceeded { cap: usize },
    #[error("strategy and payoff game are played on different graphs")]
    GameMismatch,
    #[error("payoff missing for vertex `{0}`")]
    PayoffMissing(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
