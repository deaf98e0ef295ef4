//! Initialization, route-exchange crossover with repair, and the bandits that
//! steer it.

mod bandit;
mod crossover;
mod init;
mod repair;

pub use bandit::{improvement_reward, ucb1_select, ucb1_update, BanditState};
pub use crossover::{
    crossover, dcrex, route_edges, score_route_pair, Bandits, CrossoverOutcome, DiversityLedger, Exchange,
    OffspringState, PairOption, RoutePairScore, DIVERSITY_LEVELS, PAIR_POOL,
};
pub use init::{initial_solution, initialize_population};
pub use repair::{remove_redundant, repair_insert, unrouted, InsertCtx, InsertionOperator};
