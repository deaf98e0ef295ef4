//! Diversity-controlled route-exchange crossover.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Instance, Route, Solution};

use super::bandit::BanditState;
use super::repair::{remove_redundant, repair_insert, unrouted, InsertCtx, InsertionOperator};

/// Number of discrete diversity degrees.
pub const DIVERSITY_LEVELS: usize = 20;
/// Size of the pool the exchanged pair is drawn from.
pub const PAIR_POOL: usize = 5;

/// Target band for the diversity injected into one offspring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiversityLedger {
    pub index: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub sigma_cur: usize,
}

impl DiversityLedger {
    pub fn new(index: usize, num_customers: usize, main_routes: usize) -> Self {
        let scale = (num_customers + main_routes) as f64;
        let level = |i: usize| i as f64 / DIVERSITY_LEVELS as f64;
        DiversityLedger {
            index,
            sigma_min: level(index) * scale,
            sigma_max: level(index + 1) * scale,
            sigma_cur: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoutePairScore {
    /// Edges of the donor route absent from the main parent.
    pub e_i: usize,
    /// Customers only the replaced route visits and the donor route lacks.
    pub n_r: usize,
    /// Donor customers already visited by other original routes.
    pub n_m: usize,
    /// Donor customers already visited by previously introduced routes.
    pub n_c: usize,
    pub score: i64,
    pub delta_sigma: usize,
}

/// Undirected edge key.
fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

pub fn route_edges(route: &Route, inst: &Instance) -> Vec<(usize, usize)> {
    route.nodes(inst).windows(2).map(|w| edge(w[0], w[1])).collect()
}

/// Offspring under construction.
#[derive(Clone, Debug)]
pub struct OffspringState {
    pub routes: Vec<Route>,
    /// Whether each route came from a donor parent.
    pub introduced: Vec<bool>,
    main_edges: HashSet<(usize, usize)>,
}

impl OffspringState {
    pub fn new(main: &Solution, inst: &Instance) -> Self {
        OffspringState {
            routes: main.routes.clone(),
            introduced: vec![false; main.routes.len()],
            main_edges: main.routes.iter().flat_map(|r| route_edges(r, inst)).collect(),
        }
    }

    /// Route indices visiting each node.
    fn membership(&self, inst: &Instance) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); inst.num_nodes()];
        for (k, r) in self.routes.iter().enumerate() {
            for &c in r.customers() {
                m[c].push(k);
            }
        }
        m
    }

    pub fn score(&self, ri: usize, rj: &Route, inst: &Instance) -> RoutePairScore {
        score_with(self, &self.membership(inst), ri, rj, inst)
    }

    pub fn exchange(&mut self, ri: usize, rj: &Route) {
        self.routes[ri] = rj.clone();
        self.introduced[ri] = true;
    }
}

fn score_with(state: &OffspringState, member: &[Vec<usize>], ri: usize, rj: &Route, inst: &Instance) -> RoutePairScore {
    let donor_edges: HashSet<(usize, usize)> = route_edges(rj, inst).into_iter().collect();
    let e_i = donor_edges.iter().filter(|e| !state.main_edges.contains(e)).count();
    let in_rj = |c: usize| rj.customers().contains(&c);
    let n_r = state.routes[ri]
        .customers()
        .iter()
        .filter(|&&c| !in_rj(c) && member[c].iter().all(|&k| k == ri))
        .count();
    let mut n_m = 0;
    let mut n_c = 0;
    for &c in rj.customers() {
        let others = member[c].iter().filter(|&&k| k != ri);
        let (mut orig, mut intro) = (false, false);
        for &k in others {
            if state.introduced[k] {
                intro = true;
            } else {
                orig = true;
            }
        }
        n_m += orig as usize;
        n_c += intro as usize;
    }
    let score = -(e_i as i64 - n_r as i64 - n_m as i64 - 10 * n_c as i64);
    RoutePairScore {
        e_i,
        n_r,
        n_m,
        n_c,
        score,
        delta_sigma: e_i + n_r + n_m,
    }
}

/// Score of replacing offspring route `ri` by donor route `rj`.
pub fn score_route_pair(ri: usize, rj: &Route, state: &OffspringState, inst: &Instance) -> RoutePairScore {
    state.score(ri, rj, inst)
}

/// A scored exchange option: offspring route, donor route, score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairOption {
    pub ri: usize,
    pub rj: usize,
    pub score: RoutePairScore,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Exchange {
    pub parent: usize,
    pub option: PairOption,
}

#[derive(Clone, Debug)]
pub struct CrossoverOutcome {
    pub offspring: Solution,
    pub main_parent: usize,
    pub insertion: InsertionOperator,
    pub ledger: DiversityLedger,
    pub exchanges: Vec<Exchange>,
    pub redundant: Vec<usize>,
    pub reinserted: Vec<usize>,
}

/// The two learning components used by the crossover.
#[derive(Clone, Debug, PartialEq)]
pub struct Bandits {
    pub diversity: BanditState,
    pub insertion: BanditState,
}

impl Bandits {
    pub fn new(gamma: f64) -> Self {
        Bandits {
            diversity: BanditState::new(DIVERSITY_LEVELS, gamma),
            insertion: BanditState::new(InsertionOperator::ALL.len(), gamma),
        }
    }
}

/// Deterministic core of the crossover: donor order, diversity level,
/// insertion operator and pair choice are supplied by the caller. `pick`
/// receives the lowest-scored options (at most [`PAIR_POOL`]) and returns the
/// index of the one to apply.
#[allow(clippy::too_many_arguments)]
pub fn crossover<R: Rng>(
    population: &[Solution],
    main: usize,
    donors: &[usize],
    diversity_index: usize,
    insertion: InsertionOperator,
    ctx: &InsertCtx,
    rng: &mut R,
    pick: &mut dyn FnMut(&[PairOption], &mut R) -> usize,
) -> CrossoverOutcome {
    let inst = ctx.inst;
    let mut state = OffspringState::new(&population[main], inst);
    let mut ledger = DiversityLedger::new(diversity_index, inst.num_customers(), population[main].num_routes());
    let mut exchanges = Vec::new();
    'parents: for &p in donors {
        let donor = &population[p];
        let mut used = vec![false; donor.num_routes()];
        loop {
            let member = state.membership(inst);
            let mut options = Vec::new();
            for ri in (0..state.routes.len()).filter(|&k| !state.introduced[k]) {
                for rj in (0..donor.num_routes()).filter(|&k| !used[k]) {
                    let score = score_with(&state, &member, ri, &donor.routes[rj], inst);
                    options.push(PairOption { ri, rj, score });
                }
            }
            if options.is_empty() {
                break;
            }
            options.sort_by_key(|o| (o.score.score, o.ri, o.rj));
            options.truncate(PAIR_POOL);
            let chosen = options[pick(&options, rng)];
            let ds = chosen.score.delta_sigma;
            if ds == 0 {
                break;
            }
            // The first exchange always happens; later ones must stay below
            // the upper bound, otherwise the next donor is tried.
            if !exchanges.is_empty() && (ledger.sigma_cur + ds) as f64 >= ledger.sigma_max {
                break;
            }
            state.exchange(chosen.ri, &donor.routes[chosen.rj]);
            used[chosen.rj] = true;
            ledger.sigma_cur += ds;
            exchanges.push(Exchange {
                parent: p,
                option: chosen,
            });
            if ledger.sigma_cur as f64 >= ledger.sigma_min {
                break 'parents;
            }
        }
    }
    let mut offspring = Solution::new(Vec::new());
    offspring.routes = state.routes;
    let redundant = remove_redundant(&mut offspring, &state.introduced, inst);
    let missing = unrouted(&offspring, inst);
    offspring.remove_empty_routes();
    repair_insert(&mut offspring, &missing, insertion, ctx, rng);
    offspring.remove_empty_routes();
    CrossoverOutcome {
        offspring,
        main_parent: main,
        insertion,
        ledger,
        exchanges,
        redundant,
        reinserted: missing,
    }
}

/// Crossover with a random main parent, random donor order, bandit-chosen
/// diversity level and insertion operator, and uniform choice among the
/// lowest-scored route pairs.
pub fn dcrex<R: Rng>(population: &[Solution], bandits: &Bandits, ctx: &InsertCtx, rng: &mut R) -> CrossoverOutcome {
    assert!(population.len() >= 2, "crossover needs at least two parents");
    let main = rng.gen_range(0..population.len());
    let mut donors: Vec<usize> = (0..population.len()).filter(|&k| k != main).collect();
    donors.shuffle(rng);
    let level = bandits.diversity.select();
    let insertion = InsertionOperator::ALL[bandits.insertion.select()];
    crossover(
        population,
        main,
        &donors,
        level,
        insertion,
        ctx,
        rng,
        &mut |opts, rng| rng.gen_range(0..opts.len()),
    )
}
