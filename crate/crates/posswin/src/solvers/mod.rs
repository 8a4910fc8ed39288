//! Possible-winner solvers: enumeration, flow computations for plurality
//! and veto, and a plateau-aware exact search for general vectors.

mod brute;
mod flow;
mod plateau;

pub use brute::{joint_extension_space, necessary_winner_bruteforce, possible_winner_bruteforce};
pub use flow::{possible_winner_plurality_flow, possible_winner_veto_flow};
pub use plateau::{possible_winner_plateau_search, vote_assignments, BlockAssignment};

use crate::election::{ElectionError, LinearOrder};
use thiserror::Error;

/// Outcome of one solver call.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub answer: bool,
    /// Full extension profile in which the distinguished candidate wins;
    /// present only when `answer` is true and the solver produces one.
    pub witness: Option<Vec<LinearOrder>>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    /// Search nodes explored or joint extensions enumerated.
    pub nodes: u64,
    /// Max-flow value, for the flow solvers.
    pub flow: Option<i64>,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("joint extension space exceeds cap of {0}")]
    CapExceeded(u64),
    #[error("node budget of {budget} exhausted after {explored} nodes; answer unknown")]
    BudgetExceeded { budget: u64, explored: u64 },
    #[error("solver requires the {expected} rule")]
    WrongRule { expected: &'static str },
    #[error("per-vote assignment enumeration exceeds {0} entries")]
    AssignmentCapExceeded(u64),
    #[error(transparent)]
    Election(#[from] ElectionError),
}
