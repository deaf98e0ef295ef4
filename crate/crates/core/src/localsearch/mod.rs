//! Best-improvement local search over six operators with penalty-guided
//! acceptance and optional leader-follower multi-move updates.

mod cache;
mod enumerate;
mod moves;
mod search;

pub use cache::{CachedSource, RouteCache, SolutionCache};
pub use enumerate::{enumerate, respects_mask};
pub use moves::{Move, MoveOperator, ReplaceMode};
pub use search::{
    apply_moves, apply_moves_in_place, evaluate_batch, mdfis, select_moves, Batch, Candidate, SearchConfig, Searcher,
    StepRecord, IMPROVE_TOL,
};

#[derive(Debug, thiserror::Error)]
pub enum LocalSearchError {
    #[error("moves are not route-disjoint (route {0} appears twice)")]
    ConflictingMoves(usize),
}
