//! Complete simple games and weighted voting games: orderly enumeration,
//! exact linear-programming weightedness checks and minimum-sum integer
//! representations.

pub mod classify;
pub mod coalition;
pub mod enumerator;
pub mod error;
pub mod format;
pub mod game;
pub mod lattice;
pub mod minrep;
pub mod rational;
pub mod simplex;
pub mod weightedness;

pub use classify::{classify, max_parameters, ClassificationReport, ClassifyOptions};
pub use coalition::{Coalition, ShiftOrder, MAX_VOTERS};
pub use enumerator::{
    enumerate_complete, enumerate_weighted, EnumerationConfig, EnumerationStats, Enumerator, GameClass, Subtree, Visit,
    Visitor,
};
pub use error::{CheckpointError, FormatError, GameError};
pub use game::{CompleteGame, EquivalenceClasses};
pub use lattice::{CoalitionSet, Lattice};
pub use minrep::{
    all_min_sum_reps, all_min_sum_reps_preserving_types, lower_bound_iteration, min_sum, realizes, LowerBounds,
    MinRepResult, WeightRep,
};
pub use rational::Rational;
pub use simplex::{Constraint, LPOutcome, RationalLP, Relation, SimplexState, SimplexStats};
pub use weightedness::{is_weighted, RationalRep};
