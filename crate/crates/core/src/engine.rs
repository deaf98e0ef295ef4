//! Generational loop: crossover, local search, population update.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eval::{evaluate, scaling_constants, PenaltyState};
use crate::genetic::{dcrex, improvement_reward, initialize_population, Bandits, InsertCtx};
use crate::localsearch::{SearchConfig, Searcher};
use crate::model::{check_feasible, objective, Instance, ModelError, Solution};
use crate::neighborhood::{NeighborConfig, NeighborLists};
use crate::population::Population;

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub max_generations: usize,
    pub patience: usize,
    pub time_limit: Duration,
    pub mu: usize,
    pub theta: usize,
    pub depth: usize,
    pub kappa: f64,
    pub xi: f64,
    pub multi_move: bool,
    pub seed: u64,
    pub bandit_gamma: f64,
    /// Restart the penalty coefficients for every offspring instead of
    /// carrying them across the run.
    pub reset_penalties: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_generations: 5000,
            patience: 500,
            time_limit: Duration::from_secs(120),
            mu: 20,
            theta: 50,
            depth: 500,
            kappa: 0.5,
            xi: 0.7,
            multi_move: true,
            seed: 1,
            bandit_gamma: 0.99,
            reset_penalties: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunStats {
    /// Best feasible solution, or the best infeasible one when `feasible` is false.
    pub best: Solution,
    pub best_cost: f64,
    pub feasible: bool,
    pub generations: usize,
    /// Stagnation counter after each generation.
    pub stagnation: Vec<usize>,
    /// Best feasible cost after each generation (infinite until one is found).
    pub curve: Vec<f64>,
    pub wall_time: Duration,
}

fn fully_feasible(sol: &Solution, inst: &Instance) -> bool {
    check_feasible(sol, inst).all_ok()
}

/// Solves `inst` from scratch with the given configuration.
pub fn run(inst: &Instance, cfg: &EngineConfig) -> Result<RunStats, ModelError> {
    if cfg.mu < 2 || cfg.theta == 0 || cfg.depth == 0 || !(cfg.kappa > 0.0 && cfg.kappa < 1.0) {
        return Err(ModelError::InvalidInstance(
            "engine configuration needs mu >= 2, theta >= 1, depth >= 1 and 0 < kappa < 1".into(),
        ));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let consts = scaling_constants(inst)?;
    let nbr = NeighborLists::build(
        inst,
        &NeighborConfig {
            theta: cfg.theta,
            ..Default::default()
        },
        &consts,
    );
    let searcher = Searcher::new(
        inst,
        &consts,
        &nbr,
        SearchConfig {
            depth: cfg.depth,
            multi_move: cfg.multi_move,
        },
    );
    let mut penalties = PenaltyState::new(cfg.kappa);
    let mut bandits = Bandits::new(cfg.bandit_gamma);

    let mut pop = Population::new(cfg.mu, cfg.xi);
    let mut best: Option<(Solution, f64)> = None;
    let mut best_infeasible: Option<(Solution, f64)> = None;
    let mut consider = |sol: &Solution, f: f64, best: &mut Option<(Solution, f64)>| -> bool {
        if fully_feasible(sol, inst) {
            let d = objective(sol, inst);
            if best.as_ref().is_none_or(|(_, b)| d < *b) {
                *best = Some((sol.clone(), d));
                return true;
            }
        } else if best_infeasible.as_ref().is_none_or(|(_, b)| f < *b) {
            best_infeasible = Some((sol.clone(), f));
        }
        false
    };
    for sol in initialize_population(inst, &consts, cfg.mu, &mut rng) {
        let f = evaluate(&sol, &penalties, &consts, inst).f;
        consider(&sol, f, &mut best);
        pop.push(sol, f, inst);
    }

    let mut generations = 0;
    let mut stagnant = 0;
    let mut stagnation = Vec::new();
    let mut curve = Vec::new();
    while generations <= cfg.max_generations && stagnant <= cfg.patience && start.elapsed() <= cfg.time_limit {
        let ctx = InsertCtx {
            inst,
            consts: &consts,
            penalties: &penalties,
        };
        let outcome = dcrex(&pop.members, &bandits, &ctx, &mut rng);
        let parent = pop.members[outcome.main_parent].clone();
        if cfg.reset_penalties {
            penalties = PenaltyState::new(cfg.kappa);
        }
        let offspring = searcher.run(outcome.offspring, &mut penalties, &mut rng);
        debug_assert!(offspring.covers_exactly_once(inst));

        let eo = evaluate(&offspring, &penalties, &consts, inst);
        let ep = evaluate(&parent, &penalties, &consts, inst);
        let reward = if eo.is_feasible() && ep.is_feasible() {
            improvement_reward(ep.dist, eo.dist)
        } else {
            improvement_reward(ep.f, eo.f)
        };
        bandits.diversity.update(outcome.ledger.index, reward);
        bandits.insertion.update(outcome.insertion.index(), reward);

        if consider(&offspring, eo.f, &mut best) {
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        pop.push(offspring, eo.f, inst);
        if pop.len() >= cfg.mu + cfg.mu / 2 {
            pop.recost(|s| evaluate(s, &penalties, &consts, inst).f);
            pop.select_survivors();
        }
        generations += 1;
        stagnation.push(stagnant);
        curve.push(best.as_ref().map_or(f64::INFINITY, |b| b.1));
    }

    let (best, best_cost, feasible) = match best {
        Some((s, d)) => (s, d, true),
        None => {
            let (s, _) = best_infeasible.expect("population is never empty");
            let d = objective(&s, inst);
            (s, d, false)
        }
    };
    Ok(RunStats {
        best,
        best_cost,
        feasible,
        generations,
        stagnation,
        curve,
        wall_time: start.elapsed(),
    })
}

/// Relative gap to a reference value, in percent.
pub fn gap(f: f64, bks: f64) -> f64 {
    100.0 * (f - bks) / bks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_values() {
        assert_eq!(gap(10.0, 10.0), 0.0);
        assert_eq!(format!("{:.2}", gap(2042.45, 2058.31)), "-0.77");
        assert_eq!(format!("{:.2}", gap(4372.78, 4369.95)), "0.06");
    }
}
