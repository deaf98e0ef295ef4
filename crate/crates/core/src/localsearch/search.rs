use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::eval::{finish_delta, move_route_delta, EvalBreakdown, PenaltyState, RouteDelta, ScalingConstants};
use crate::model::{Instance, Route, Solution};
use crate::neighborhood::NeighborLists;

use super::cache::SolutionCache;
use super::enumerate::enumerate_into;
use super::moves::{Move, MoveOperator};
use super::LocalSearchError;

/// Improvements must exceed this to count.
pub const IMPROVE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of applied move sets per call.
    pub depth: usize,
    pub multi_move: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth: 500,
            multi_move: true,
        }
    }
}

/// An evaluated move.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub mv: Move,
    pub delta: EvalBreakdown,
    /// Depots whose route count the move changes; only tracked when the
    /// fleet is limited, since otherwise such changes are independent.
    pub depots: SmallVec<[usize; 4]>,
}

impl Candidate {
    pub fn conflicts_with(&self, other: &Candidate) -> bool {
        let (a, b) = (self.mv.routes(), other.mv.routes());
        a.iter().any(|r| b.contains(r)) || self.depots.iter().any(|d| other.depots.contains(d))
    }

    fn is_follower(&self) -> bool {
        self.delta.dist < -IMPROVE_TOL && self.delta.v.iter().all(|x| x.abs() <= IMPROVE_TOL)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Batch {
    pub leader: Option<Candidate>,
    pub followers: Vec<Candidate>,
}

/// A candidate with the part of its delta that survives unrelated moves.
#[derive(Clone, Debug)]
struct Entry {
    mv: Move,
    delta: RouteDelta,
}

fn evaluate_entries(
    sol: &Solution,
    cache: &SolutionCache,
    moves: &[Move],
    consts: &ScalingConstants,
    inst: &Instance,
) -> Vec<Entry> {
    let src = cache.view(sol);
    moves
        .par_iter()
        .with_min_len(512)
        .map(|mv| Entry {
            mv: *mv,
            delta: move_route_delta(mv, sol, &src, consts, inst),
        })
        .collect()
}

fn candidate(
    e: &Entry,
    cache: &SolutionCache,
    penalties: &PenaltyState,
    consts: &ScalingConstants,
    inst: &Instance,
) -> Candidate {
    let (delta, depots) = finish_delta(&e.delta, |d| cache.depot_count(d), penalties, consts, inst);
    Candidate {
        mv: e.mv,
        delta,
        depots: if inst.fleet_per_depot().is_some() {
            depots
        } else {
            SmallVec::new()
        },
    }
}

/// Leader and followers among `entries`. The result does not depend on the
/// order of `entries`: ties go to the canonically smallest move.
fn pick(
    entries: &[Entry],
    cache: &SolutionCache,
    penalties: &PenaltyState,
    consts: &ScalingConstants,
    inst: &Instance,
) -> Batch {
    let lambda = penalties.lambda;
    let mut leader: Option<(f64, usize)> = None;
    let mut followers = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        let d = &e.delta;
        let (f, follower) = if d.counts.is_empty() || inst.fleet_per_depot().is_none() {
            let f = d.dist + (0..4).map(|i| lambda[i] * d.v[i]).sum::<f64>();
            (f, d.dist < -IMPROVE_TOL && d.v.iter().all(|x| x.abs() <= IMPROVE_TOL))
        } else {
            let c = candidate(e, cache, penalties, consts, inst);
            (c.delta.f, c.is_follower())
        };
        if follower {
            followers.push(k);
        }
        if f < -IMPROVE_TOL {
            match leader {
                Some((bf, b)) if f.total_cmp(&bf).then(e.mv.cmp(&entries[b].mv)).is_ge() => {}
                _ => leader = Some((f, k)),
            }
        }
    }
    let Some((_, li)) = leader else {
        return Batch::default();
    };
    let lead = &entries[li].mv;
    Batch {
        leader: Some(candidate(&entries[li], cache, penalties, consts, inst)),
        followers: followers
            .into_iter()
            .filter(|&k| entries[k].mv != *lead)
            .map(|k| candidate(&entries[k], cache, penalties, consts, inst))
            .collect(),
    }
}

/// Evaluates every candidate and picks the leader and followers. Ties
/// resolve to the smallest move in canonical order.
pub fn evaluate_batch(
    sol: &Solution,
    moves: &[Move],
    penalties: &PenaltyState,
    consts: &ScalingConstants,
    inst: &Instance,
) -> Batch {
    let cache = SolutionCache::new(sol, consts, inst);
    let entries = evaluate_entries(sol, &cache, moves, consts, inst);
    pick(&entries, &cache, penalties, consts, inst)
}

/// Leader first, then followers by ascending delta, skipping conflicts.
pub fn select_moves(leader: Candidate, mut followers: Vec<Candidate>) -> Vec<Candidate> {
    followers.sort_by(|a, b| a.delta.f.total_cmp(&b.delta.f).then(a.mv.cmp(&b.mv)));
    let mut chosen = vec![leader];
    for f in followers {
        if chosen.iter().all(|c| !c.conflicts_with(&f)) {
            chosen.push(f);
        }
    }
    chosen
}

fn check_disjoint(moves: &[Move]) -> Result<(), LocalSearchError> {
    let mut seen: Vec<usize> = Vec::new();
    for m in moves {
        for r in m.routes() {
            if seen.contains(&r) {
                return Err(LocalSearchError::ConflictingMoves(r));
            }
            seen.push(r);
        }
    }
    Ok(())
}

/// Builds the routes of all moves against `sol` and writes them in place.
/// Returns the slots that changed (appended routes included).
fn write_moves(sol: &mut Solution, moves: &[Move], inst: &Instance) -> Vec<usize> {
    let mut changed = Vec::new();
    let mut writes: Vec<(Option<usize>, Route)> = Vec::new();
    for m in moves {
        let plan = m.plan(sol, inst);
        for (k, nr) in plan.added.iter().enumerate() {
            let route = nr.build(sol, inst);
            writes.push((plan.removed.get(k).copied(), route));
        }
        for &slot in plan.removed.iter().skip(plan.added.len()) {
            let r = &sol.routes[slot];
            writes.push((Some(slot), Route::new(r.depart(), r.arrive(), Vec::new(), inst)));
        }
    }
    for (slot, route) in writes {
        match slot {
            Some(s) => {
                sol.routes[s] = route;
                changed.push(s);
            }
            None => {
                changed.push(sol.routes.len());
                sol.routes.push(route);
            }
        }
    }
    changed
}

/// Applies pairwise route-disjoint moves enumerated on `sol`.
pub fn apply_moves(sol: &Solution, moves: &[Move], inst: &Instance) -> Result<Solution, LocalSearchError> {
    check_disjoint(moves)?;
    let mut out = sol.clone();
    write_moves(&mut out, moves, inst);
    out.remove_empty_routes();
    Ok(out)
}

/// Like [`apply_moves`] but in place and keeping emptied routes as empty
/// slots, so route indices stay valid for later moves. Returns the slots
/// written.
pub fn apply_moves_in_place(
    sol: &mut Solution,
    moves: &[Move],
    inst: &Instance,
) -> Result<Vec<usize>, LocalSearchError> {
    check_disjoint(moves)?;
    Ok(write_moves(sol, moves, inst))
}

fn apply_cached(
    sol: &mut Solution,
    cache: &mut SolutionCache,
    moves: &[Move],
    consts: &ScalingConstants,
    inst: &Instance,
) -> Vec<usize> {
    let changed = write_moves(sol, moves, inst);
    cache.update(&changed, sol, consts, inst);
    changed
}

/// Evaluated candidates of one operator, kept across steps. Entries touching
/// a dirty route are stale.
#[derive(Default)]
struct OpState {
    ready: bool,
    entries: Vec<Entry>,
    dirty: Vec<bool>,
}

impl OpState {
    fn mark(&mut self, slots: &[usize], num_routes: usize) {
        self.dirty.resize(num_routes, false);
        for &s in slots {
            self.dirty[s] = true;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn refresh(
        &mut self,
        op: MoveOperator,
        sol: &Solution,
        cache: &SolutionCache,
        nbr: &NeighborLists,
        consts: &ScalingConstants,
        inst: &Instance,
        scratch: &mut Vec<Move>,
    ) {
        scratch.clear();
        if self.ready {
            let dirty = &self.dirty;
            self.entries.retain(|e| e.mv.routes().iter().all(|&r| !dirty[r]));
            enumerate_into(sol, cache.positions(), op, nbr, inst, Some(dirty), scratch);
        } else {
            enumerate_into(sol, cache.positions(), op, nbr, inst, None, scratch);
            self.ready = true;
        }
        if sol.routes.len() < 1 << 16 && inst.num_nodes() < 1 << 16 {
            scratch.sort_by_cached_key(|m| m.key());
            scratch.dedup();
        }
        self.entries.extend(evaluate_entries(sol, cache, scratch, consts, inst));
        self.dirty.clear();
        self.dirty.resize(sol.routes.len(), false);
    }
}

/// One applied move set, recorded for auditing.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub operator: MoveOperator,
    pub moves: Vec<Move>,
    /// Evaluation before and after, under the coefficients used for selection.
    pub before: EvalBreakdown,
    pub after: EvalBreakdown,
    pub predicted: f64,
}

/// Local search context shared across calls.
pub struct Searcher<'a> {
    pub inst: &'a Instance,
    pub consts: &'a ScalingConstants,
    pub nbr: &'a NeighborLists,
    pub cfg: SearchConfig,
}

impl<'a> Searcher<'a> {
    pub fn new(inst: &'a Instance, consts: &'a ScalingConstants, nbr: &'a NeighborLists, cfg: SearchConfig) -> Self {
        Searcher { inst, consts, nbr, cfg }
    }

    pub fn run<R: Rng>(&self, sol: Solution, penalties: &mut PenaltyState, rng: &mut R) -> Solution {
        self.run_traced(sol, penalties, rng, None)
    }

    pub fn run_traced<R: Rng>(
        &self,
        sol: Solution,
        penalties: &mut PenaltyState,
        rng: &mut R,
        trace: Option<&mut Vec<StepRecord>>,
    ) -> Solution {
        self.run_with(sol, penalties, rng, trace, true)
    }

    /// With `incremental` off every scan re-evaluates all candidates; the
    /// outcome must be the same.
    fn run_with<R: Rng>(
        &self,
        mut sol: Solution,
        penalties: &mut PenaltyState,
        rng: &mut R,
        mut trace: Option<&mut Vec<StepRecord>>,
        incremental: bool,
    ) -> Solution {
        let inst = self.inst;
        sol.remove_empty_routes();
        let mut cache = SolutionCache::new(&sol, self.consts, inst);
        let mut ops = MoveOperator::enabled(inst);
        let mut states: Vec<OpState> = (0..MoveOperator::ALL.len()).map(|_| OpState::default()).collect();
        let mut scratch = Vec::new();
        let mut applied = 0;
        let mut improved = true;
        while improved && applied < self.cfg.depth {
            improved = false;
            ops.shuffle(rng);
            for &op in &ops {
                if applied >= self.cfg.depth {
                    break;
                }
                let state = &mut states[op as usize];
                state.refresh(op, &sol, &cache, self.nbr, self.consts, inst, &mut scratch);
                let batch = pick(&state.entries, &cache, penalties, self.consts, inst);
                let Some(leader) = batch.leader else { continue };
                let chosen = if self.cfg.multi_move {
                    select_moves(leader, batch.followers)
                } else {
                    vec![leader]
                };
                let chosen_moves: Vec<Move> = chosen.iter().map(|c| c.mv).collect();
                let before = trace.as_ref().map(|_| cache.evaluate(penalties, self.consts, inst));
                let changed = apply_cached(&mut sol, &mut cache, &chosen_moves, self.consts, inst);
                for s in &mut states {
                    s.mark(&changed, sol.routes.len());
                    if !incremental {
                        s.ready = false;
                        s.entries.clear();
                    }
                }
                let after = cache.evaluate(penalties, self.consts, inst);
                if let (Some(t), Some(before)) = (trace.as_deref_mut(), before) {
                    t.push(StepRecord {
                        operator: op,
                        moves: chosen_moves,
                        before,
                        after,
                        predicted: chosen.iter().map(|c| c.delta.f).sum(),
                    });
                }
                penalties.adapt(after.violated());
                applied += 1;
                improved = true;
            }
        }
        sol.remove_empty_routes();
        sol
    }
}

/// Feasible-and-infeasible local search from `sol`.
pub fn mdfis<R: Rng>(
    sol: Solution,
    penalties: &mut PenaltyState,
    cfg: &SearchConfig,
    nbr: &NeighborLists,
    consts: &ScalingConstants,
    inst: &Instance,
    rng: &mut R,
) -> Solution {
    Searcher::new(inst, consts, nbr, *cfg).run(sol, penalties, rng)
}
