//! Duplicate removal and insertion of unrouted customers.

use rand::Rng;

use crate::eval::{route_terms, PenaltyState, RouteTerms, ScalingConstants, SeqAttr, VIOLATION_TOL};
use crate::model::{Instance, Route, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InsertionOperator {
    /// Feasible best insertion; opens a route when no feasible slot exists.
    Fbi,
    /// Infeasible best insertion; never opens a route.
    Ibi,
    /// Feasible regret insertion.
    Fri,
    /// Infeasible regret insertion.
    Iri,
    /// Uniformly random route and position.
    Ri,
}

impl InsertionOperator {
    pub const ALL: [InsertionOperator; 5] = [
        InsertionOperator::Fbi,
        InsertionOperator::Ibi,
        InsertionOperator::Fri,
        InsertionOperator::Iri,
        InsertionOperator::Ri,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&o| o == self).unwrap()
    }

    fn feasible_only(self) -> bool {
        matches!(self, InsertionOperator::Fbi | InsertionOperator::Fri)
    }

    fn regret(self) -> bool {
        matches!(self, InsertionOperator::Fri | InsertionOperator::Iri)
    }
}

/// Evaluation context for insertions.
#[derive(Clone, Copy)]
pub struct InsertCtx<'a> {
    pub inst: &'a Instance,
    pub consts: &'a ScalingConstants,
    pub penalties: &'a PenaltyState,
}

impl InsertCtx<'_> {
    fn weighted(&self, t: &RouteTerms) -> f64 {
        t.dist + (0..4).map(|i| self.penalties.lambda[i] * t.v[i]).sum::<f64>()
    }

    fn terms(&self, attr: &SeqAttr, depart: usize, arrive: usize) -> RouteTerms {
        route_terms(attr, depart, arrive, self.consts, self.inst)
    }
}

/// Prefix and suffix attributes of one route for constant-time insertion
/// queries.
struct Slots {
    depart: usize,
    arrive: usize,
    prefix: Vec<SeqAttr>,
    suffix: Vec<SeqAttr>,
    cost: f64,
}

impl Slots {
    fn new(route: &Route, ctx: &InsertCtx) -> Self {
        let inst = ctx.inst;
        let c = route.customers();
        let mut prefix = Vec::with_capacity(c.len() + 1);
        let mut acc = SeqAttr::single(route.depart(), inst);
        prefix.push(acc);
        for &x in c {
            acc = acc.then(&SeqAttr::single(x, inst), inst);
            prefix.push(acc);
        }
        let mut suffix = vec![SeqAttr::EMPTY; c.len() + 1];
        let mut acc = if inst.open_routes() {
            SeqAttr::EMPTY
        } else {
            SeqAttr::single(route.arrive(), inst)
        };
        suffix[c.len()] = acc;
        for k in (0..c.len()).rev() {
            acc = SeqAttr::single(c[k], inst).then(&acc, inst);
            suffix[k] = acc;
        }
        let t = ctx.terms(route.attr(), route.depart(), route.arrive());
        Slots {
            depart: route.depart(),
            arrive: route.arrive(),
            prefix,
            suffix,
            cost: ctx.weighted(&t),
        }
    }

    /// `(cost increase, feasible)` of inserting `c` before index `pos`.
    fn insert(&self, c: usize, pos: usize, ctx: &InsertCtx) -> (f64, bool) {
        let inst = ctx.inst;
        let a = self.prefix[pos]
            .then(&SeqAttr::single(c, inst), inst)
            .then(&self.suffix[pos], inst);
        let t = ctx.terms(&a, self.depart, self.arrive);
        let feasible = t.v[..3].iter().all(|&x| x <= VIOLATION_TOL);
        (ctx.weighted(&t) - self.cost, feasible)
    }
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    cost: f64,
    route: usize,
    pos: usize,
}

/// Best and second-best slot costs for `c`, restricted to feasible slots if
/// requested. Ties resolve to the first slot in route order.
fn best_two(c: usize, slots: &[Slots], feasible_only: bool, ctx: &InsertCtx) -> (Option<Slot>, f64) {
    let mut best: Option<Slot> = None;
    let mut second = f64::INFINITY;
    for (r, s) in slots.iter().enumerate() {
        for pos in 0..s.prefix.len() {
            let (cost, feasible) = s.insert(c, pos, ctx);
            if feasible_only && !feasible {
                continue;
            }
            match best {
                Some(b) if cost >= b.cost => second = second.min(cost),
                Some(b) => {
                    second = b.cost;
                    best = Some(Slot { cost, route: r, pos });
                }
                None => best = Some(Slot { cost, route: r, pos }),
            }
        }
    }
    (best, second)
}

fn open_route(sol: &mut Solution, c: usize, inst: &Instance) {
    let d = inst.nearest_depot(c);
    sol.routes.push(Route::new(d, d, vec![c], inst));
}

pub(crate) fn insert_at(sol: &mut Solution, route: usize, pos: usize, c: usize, inst: &Instance) {
    let r = &sol.routes[route];
    let mut cs = r.customers().to_vec();
    cs.insert(pos, c);
    sol.routes[route] = Route::new(r.depart(), r.arrive(), cs, inst);
}

/// Cheapest slot `(route, position)` for `c`.
pub(crate) fn best_slot(sol: &Solution, c: usize, feasible_only: bool, ctx: &InsertCtx) -> Option<(usize, usize)> {
    let slots: Vec<Slots> = sol.routes.iter().map(|r| Slots::new(r, ctx)).collect();
    best_two(c, &slots, feasible_only, ctx).0.map(|s| (s.route, s.pos))
}

/// Inserts every customer of `unrouted` into `sol` with the given operator.
pub fn repair_insert<R: Rng>(
    sol: &mut Solution,
    unrouted: &[usize],
    op: InsertionOperator,
    ctx: &InsertCtx,
    rng: &mut R,
) {
    let inst = ctx.inst;
    let mut pending: Vec<usize> = unrouted.to_vec();
    pending.sort_unstable();
    pending.dedup();
    if op == InsertionOperator::Ri {
        for c in pending {
            if sol.routes.is_empty() {
                open_route(sol, c, inst);
                continue;
            }
            let r = rng.gen_range(0..sol.routes.len());
            let pos = rng.gen_range(0..=sol.routes[r].len());
            insert_at(sol, r, pos, c, inst);
        }
        return;
    }
    let feasible_only = op.feasible_only();
    while !pending.is_empty() {
        let slots: Vec<Slots> = sol.routes.iter().map(|r| Slots::new(r, ctx)).collect();
        // (index in pending, chosen slot)
        let pick: (usize, Option<Slot>) = if op.regret() {
            let mut chosen = (0, None);
            let mut best_regret = f64::NEG_INFINITY;
            for (k, &c) in pending.iter().enumerate() {
                let (b, second) = best_two(c, &slots, feasible_only, ctx);
                let regret = match b {
                    Some(b) => second - b.cost,
                    None => f64::INFINITY,
                };
                if regret > best_regret {
                    best_regret = regret;
                    chosen = (k, b);
                }
            }
            chosen
        } else {
            (0, best_two(pending[0], &slots, feasible_only, ctx).0)
        };
        let c = pending.remove(pick.0);
        match pick.1 {
            Some(o) => insert_at(sol, o.route, o.pos, c, inst),
            None => open_route(sol, c, inst),
        }
    }
}

/// Removes duplicate visits. An occurrence in a route flagged in `keep` wins
/// over others; among the remaining candidates the copies whose removal saves
/// the most distance go first. Returns the customers whose copies were removed.
pub fn remove_redundant(sol: &mut Solution, keep: &[bool], inst: &Instance) -> Vec<usize> {
    let mut removed = Vec::new();
    loop {
        let counts = sol.visit_counts(inst);
        let Some(c) = inst.customers().find(|&c| counts[c] > 1) else {
            break;
        };
        let occ: Vec<(usize, usize)> = sol
            .routes
            .iter()
            .enumerate()
            .filter_map(|(r, route)| route.customers().iter().position(|&x| x == c).map(|p| (r, p)))
            .collect();
        let preferred = occ.iter().any(|&(r, _)| keep[r]);
        let saving = |&(r, p): &(usize, usize)| {
            let nodes = sol.routes[r].nodes(inst);
            let (prev, next) = (nodes[p], nodes.get(p + 2).copied());
            let cur = nodes[p + 1];
            match next {
                Some(n) => inst.dist(prev, cur) + inst.dist(cur, n) - inst.dist(prev, n),
                None => inst.dist(prev, cur),
            }
        };
        let victim = occ
            .iter()
            .filter(|&&(r, _)| !preferred || !keep[r])
            .max_by(|a, b| saving(a).total_cmp(&saving(b)).then(b.0.cmp(&a.0)))
            .copied()
            .unwrap_or(occ[0]);
        let r = &sol.routes[victim.0];
        let mut cs = r.customers().to_vec();
        cs.remove(victim.1);
        sol.routes[victim.0] = Route::new(r.depart(), r.arrive(), cs, inst);
        removed.push(c);
    }
    removed.sort_unstable();
    removed.dedup();
    removed
}

/// Customers missing from `sol`.
pub fn unrouted(sol: &Solution, inst: &Instance) -> Vec<usize> {
    let counts = sol.visit_counts(inst);
    inst.customers().filter(|&c| counts[c] == 0).collect()
}
