//! Penalised evaluation: subsequence attributes, penalty terms and move deltas.

mod attr;
mod breakdown;
mod delta;
mod penalty;

pub use attr::{concat, single_attr, SeqAttr};
pub use breakdown::{evaluate, fleet_term, route_terms, EvalBreakdown, RouteTerms, VIOLATION_TOL};
pub use delta::{
    finish_delta, move_delta, move_route_delta, plan_delta, plan_route_delta, DirectSource, MovePlan, NewRoute, Piece,
    RouteDelta, SegmentSource,
};
pub use penalty::{adapt_penalties, scaling_constants, PenaltyState, ScalingConstants, LAMBDA_MAX, LAMBDA_MIN};
