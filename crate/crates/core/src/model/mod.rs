//! Problem data, solution representation and ground-truth checks.

mod feasibility;
mod instance;
mod solution;

pub use feasibility::{
    check_feasible, sequence_profile, simulate_route, warp_schedule, FeasibilityReport, RouteSchedule, SequenceProfile,
    FEAS_TOL,
};
pub use instance::{FleetLimits, Instance, Node, NodeKind, Variant};
pub use solution::{objective, route_distance, Route, Solution, SolutionMeta};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid solution: {0}")]
    InvalidSolution(String),
}
