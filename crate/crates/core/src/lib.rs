//! Lattice-valued linear logic, Conway games with lattice payoffs, and a
//! goal-lattice planner built on both.
//!
//! - [`lattice`]: finite bounded lattices, Heyting implication.
//! - [`phase`]: element-level phase semantics on a lattice with a monoid
//!   table, the ambiguous-table solver, and a subset-level oracle.
//! - [`conway`]: polarized games, strategies, composition, payoff games.
//! - [`planner`]: gridworld scenarios, goal priorities, play selection and
//!   the cognition loop.
//! - [`dot`]: Graphviz output for lattices, games and traces.

pub mod conway;
pub mod dot;
mod error;
pub mod lattice;
pub mod phase;
pub mod planner;

pub use error::Error;
pub use lattice::{Element, Lattice, LatticeDoc, LatticeError};
pub use phase::{PhaseError, PhaseStructure};
