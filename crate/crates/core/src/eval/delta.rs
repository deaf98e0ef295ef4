//! Moves expressed as rearrangements of route fragments, and their deltas.

use smallvec::SmallVec;

use crate::localsearch::Move;
use crate::model::{Instance, Route, Solution};

use super::{fleet_term, route_terms, EvalBreakdown, PenaltyState, RouteTerms, ScalingConstants, SeqAttr};

/// One fragment of a rebuilt route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    Node(usize),
    /// `customers[start..end]` of an existing route, optionally reversed.
    Run {
        route: usize,
        start: usize,
        end: usize,
        reversed: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewRoute {
    pub depart: usize,
    pub arrive: usize,
    pub pieces: SmallVec<[Piece; 5]>,
}

impl NewRoute {
    pub fn num_customers(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| match *p {
                Piece::Node(_) => 1,
                Piece::Run { start, end, .. } => end.saturating_sub(start),
            })
            .sum()
    }

    pub fn customers(&self, sol: &Solution) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_customers());
        for p in &self.pieces {
            match *p {
                Piece::Node(v) => out.push(v),
                Piece::Run {
                    route,
                    start,
                    end,
                    reversed,
                } => {
                    let seg = &sol.routes[route].customers()[start..end];
                    if reversed {
                        out.extend(seg.iter().rev());
                    } else {
                        out.extend_from_slice(seg);
                    }
                }
            }
        }
        out
    }

    pub fn build(&self, sol: &Solution, inst: &Instance) -> Route {
        Route::new(self.depart, self.arrive, self.customers(sol), inst)
    }
}

/// Routes to delete and routes to add. Every removed slot is replaced by the
/// added routes in order; surplus added routes are appended.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MovePlan {
    pub removed: SmallVec<[usize; 2]>,
    pub added: SmallVec<[NewRoute; 2]>,
}

/// Access to fragment attributes of the current solution.
pub trait SegmentSource {
    fn route(&self, r: usize) -> &Route;
    /// Attributes of `customers[start..end]` of route `r` (non-empty range).
    fn run(&self, r: usize, start: usize, end: usize) -> SeqAttr;
    fn terms(&self, r: usize) -> RouteTerms;
    fn depot_count(&self, depot: usize) -> usize;
}

/// Recomputes everything from the routes; linear in route length.
pub struct DirectSource<'a> {
    sol: &'a Solution,
    consts: &'a ScalingConstants,
    inst: &'a Instance,
    counts: Vec<usize>,
}

impl<'a> DirectSource<'a> {
    pub fn new(sol: &'a Solution, consts: &'a ScalingConstants, inst: &'a Instance) -> Self {
        DirectSource {
            sol,
            consts,
            inst,
            counts: sol.routes_per_depot(inst),
        }
    }
}

impl SegmentSource for DirectSource<'_> {
    fn route(&self, r: usize) -> &Route {
        &self.sol.routes[r]
    }

    fn run(&self, r: usize, start: usize, end: usize) -> SeqAttr {
        SeqAttr::of_sequence(self.sol.routes[r].customers()[start..end].iter().copied(), self.inst)
    }

    fn terms(&self, r: usize) -> RouteTerms {
        let route = &self.sol.routes[r];
        route_terms(route.attr(), route.depart(), route.arrive(), self.consts, self.inst)
    }

    fn depot_count(&self, depot: usize) -> usize {
        self.counts[depot]
    }
}

fn piece_attr<S: SegmentSource>(piece: &Piece, src: &S, inst: &Instance) -> SeqAttr {
    match *piece {
        Piece::Node(v) => SeqAttr::single(v, inst),
        Piece::Run {
            route,
            start,
            end,
            reversed,
        } => {
            if start >= end {
                return SeqAttr::EMPTY;
            }
            let a = src.run(route, start, end);
            if reversed {
                debug_assert!(inst.variant().symmetric());
                a.reversed_windowless()
            } else {
                a
            }
        }
    }
}

/// Attributes of a rebuilt route, depots included.
fn pieces_attr<S: SegmentSource>(depart: usize, arrive: usize, pieces: &[Piece], src: &S, inst: &Instance) -> SeqAttr {
    let mut a = SeqAttr::single(depart, inst);
    for p in pieces {
        a = a.then(&piece_attr(p, src, inst), inst);
    }
    if !inst.open_routes() {
        a = a.then(&SeqAttr::single(arrive, inst), inst);
    }
    a
}

/// Part of a move's delta that only depends on the routes it touches.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RouteDelta {
    pub dist: f64,
    pub v: [f64; 4],
    /// Net change in the number of routes leaving each depot.
    pub counts: SmallVec<[(usize, isize); 2]>,
}

pub fn plan_route_delta<S: SegmentSource>(
    plan: &MovePlan,
    src: &S,
    consts: &ScalingConstants,
    inst: &Instance,
) -> RouteDelta {
    let mut out = RouteDelta::default();
    for &r in &plan.removed {
        out.remove(r, src);
    }
    for nr in &plan.added {
        out.add(nr.depart, nr.arrive, &nr.pieces, src, consts, inst);
    }
    out.counts.retain(|(_, by)| *by != 0);
    out
}

/// Same as [`plan_route_delta`] on `mv.plan(sol, inst)`, without building
/// the plan.
pub fn move_route_delta<S: SegmentSource>(
    mv: &Move,
    sol: &Solution,
    src: &S,
    consts: &ScalingConstants,
    inst: &Instance,
) -> RouteDelta {
    let mut out = RouteDelta::default();
    for r in mv.routes() {
        out.remove(r, src);
    }
    mv.visit(sol, inst, |depart, arrive, pieces| {
        out.add(depart, arrive, pieces, src, consts, inst)
    });
    out.counts.retain(|(_, by)| *by != 0);
    out
}

impl RouteDelta {
    fn bump(&mut self, d: usize, by: isize) {
        match self.counts.iter_mut().find(|(x, _)| *x == d) {
            Some(e) => e.1 += by,
            None => self.counts.push((d, by)),
        }
    }

    fn remove<S: SegmentSource>(&mut self, r: usize, src: &S) {
        let route = src.route(r);
        if route.is_empty() {
            return;
        }
        let t = src.terms(r);
        self.dist -= t.dist;
        for i in 0..4 {
            self.v[i] -= t.v[i];
        }
        self.bump(route.depart(), -1);
    }

    fn add<S: SegmentSource>(
        &mut self,
        depart: usize,
        arrive: usize,
        pieces: &[Piece],
        src: &S,
        consts: &ScalingConstants,
        inst: &Instance,
    ) {
        let empty = pieces
            .iter()
            .all(|p| matches!(*p, Piece::Run { start, end, .. } if start >= end));
        if empty {
            return;
        }
        let arrive = if inst.open_routes() { depart } else { arrive };
        let a = pieces_attr(depart, arrive, pieces, src, inst);
        let t = route_terms(&a, depart, arrive, consts, inst);
        self.dist += t.dist;
        for i in 0..4 {
            self.v[i] += t.v[i];
        }
        self.bump(depart, 1);
    }
}

/// Completes a [`RouteDelta`] with the fleet-size term under the current
/// depot counts. Also returns the depots whose count changes.
pub fn finish_delta(
    rd: &RouteDelta,
    depot_count: impl Fn(usize) -> usize,
    penalties: &PenaltyState,
    consts: &ScalingConstants,
    inst: &Instance,
) -> (EvalBreakdown, SmallVec<[usize; 4]>) {
    let mut v = rd.v;
    let mut changed = SmallVec::new();
    for &(d, by) in &rd.counts {
        changed.push(d);
        let before = depot_count(d);
        let after = (before as isize + by) as usize;
        v[3] += fleet_term(after, consts, inst) - fleet_term(before, consts, inst);
    }
    (EvalBreakdown::from_terms(rd.dist, v, penalties), changed)
}

/// Change in the evaluation caused by `plan`, plus the depots whose route
/// count changes.
pub fn plan_delta<S: SegmentSource>(
    plan: &MovePlan,
    src: &S,
    penalties: &PenaltyState,
    consts: &ScalingConstants,
    inst: &Instance,
) -> (EvalBreakdown, SmallVec<[usize; 4]>) {
    let rd = plan_route_delta(plan, src, consts, inst);
    finish_delta(&rd, |d| src.depot_count(d), penalties, consts, inst)
}

/// Delta of a single move computed directly from the solution's routes.
pub fn move_delta(
    sol: &Solution,
    mv: &Move,
    penalties: &PenaltyState,
    consts: &ScalingConstants,
    inst: &Instance,
) -> EvalBreakdown {
    let src = DirectSource::new(sol, consts, inst);
    plan_delta(&mv.plan(sol, inst), &src, penalties, consts, inst).0
}
