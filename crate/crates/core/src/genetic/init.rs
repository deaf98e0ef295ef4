//! Construction of the initial population.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::eval::{PenaltyState, ScalingConstants};
use crate::model::{Instance, Route, Solution};

use super::repair::{best_slot, insert_at, repair_insert, InsertCtx, InsertionOperator};

/// Cluster-first construction: nearest-depot assignment, greedy feasible
/// insertion per depot in random order, then relaxed insertion of leftovers.
pub fn initial_solution<R: Rng>(inst: &Instance, consts: &ScalingConstants, rng: &mut R) -> Solution {
    let penalties = PenaltyState::default();
    let ctx = InsertCtx {
        inst,
        consts,
        penalties: &penalties,
    };
    let mut clusters = vec![Vec::new(); inst.num_depots()];
    for c in inst.customers() {
        clusters[inst.nearest_depot(c)].push(c);
    }
    let mut routes = Vec::new();
    let mut leftover = Vec::new();
    for (d, mut members) in clusters.into_iter().enumerate() {
        members.shuffle(rng);
        let mut depot_sol = Solution::default();
        for c in members {
            if try_feasible_insert(&mut depot_sol, c, &ctx) {
                continue;
            }
            let room = inst.fleet_per_depot().is_none_or(|n| depot_sol.num_routes() < n);
            let single = Route::new(d, d, vec![c], inst);
            if room {
                depot_sol.routes.push(single);
            } else {
                leftover.push(c);
            }
        }
        routes.extend(depot_sol.routes);
    }
    let mut sol = Solution::new(routes);
    if !leftover.is_empty() {
        repair_insert(&mut sol, &leftover, InsertionOperator::Ibi, &ctx, rng);
    }
    sol
}

/// Best feasible insertion of `c`; false when no slot keeps its route feasible.
fn try_feasible_insert(sol: &mut Solution, c: usize, ctx: &InsertCtx) -> bool {
    match best_slot(sol, c, true, ctx) {
        Some((r, pos)) => {
            insert_at(sol, r, pos, c, ctx.inst);
            true
        }
        None => false,
    }
}

pub fn initialize_population<R: Rng>(
    inst: &Instance,
    consts: &ScalingConstants,
    mu: usize,
    rng: &mut R,
) -> Vec<Solution> {
    (0..mu).map(|_| initial_solution(inst, consts, rng)).collect()
}
