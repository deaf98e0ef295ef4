//! Per-route fragment tables kept in step with the solution under search.

use crate::eval::{
    fleet_term, route_terms, EvalBreakdown, PenaltyState, RouteTerms, ScalingConstants, SegmentSource, SeqAttr,
};
use crate::model::{Instance, Route, Solution};

/// Attributes of every contiguous customer run of one route.
#[derive(Clone, Debug)]
pub struct RouteCache {
    n: usize,
    table: Vec<SeqAttr>,
}

impl RouteCache {
    pub fn build(route: &Route, inst: &Instance) -> Self {
        let c = route.customers();
        let n = c.len();
        let mut table = vec![SeqAttr::EMPTY; n * n];
        for i in 0..n {
            let mut acc = SeqAttr::single(c[i], inst);
            table[i * n + i] = acc;
            for j in (i + 1)..n {
                acc = acc.then(&SeqAttr::single(c[j], inst), inst);
                table[i * n + j] = acc;
            }
        }
        RouteCache { n, table }
    }

    /// Attributes of `customers[start..end]`.
    #[inline]
    pub fn run(&self, start: usize, end: usize) -> SeqAttr {
        debug_assert!(start < end && end <= self.n);
        self.table[start * self.n + end - 1]
    }
}

pub const UNROUTED: (usize, usize) = (usize::MAX, usize::MAX);

#[derive(Clone, Debug)]
pub struct SolutionCache {
    routes: Vec<RouteCache>,
    terms: Vec<RouteTerms>,
    counts: Vec<usize>,
    /// `(route, index)` of every customer; depots and unrouted nodes map to
    /// [`UNROUTED`].
    position: Vec<(usize, usize)>,
}

impl SolutionCache {
    pub fn new(sol: &Solution, consts: &ScalingConstants, inst: &Instance) -> Self {
        let routes = sol.routes.iter().map(|r| RouteCache::build(r, inst)).collect();
        let terms = sol
            .routes
            .iter()
            .map(|r| route_terms(r.attr(), r.depart(), r.arrive(), consts, inst))
            .collect();
        let mut cache = SolutionCache {
            routes,
            terms,
            counts: Vec::new(),
            position: Vec::new(),
        };
        cache.reindex(sol, inst);
        cache
    }

    fn reindex(&mut self, sol: &Solution, inst: &Instance) {
        self.counts = sol.routes_per_depot(inst);
        self.position = vec![UNROUTED; inst.num_nodes()];
        for (ri, r) in sol.routes.iter().enumerate() {
            for (k, &c) in r.customers().iter().enumerate() {
                self.position[c] = (ri, k);
            }
        }
    }

    /// Refreshes the entries of rewritten route slots. Slots may be empty;
    /// they keep their index and contribute nothing.
    pub(crate) fn update(&mut self, slots: &[usize], sol: &Solution, consts: &ScalingConstants, inst: &Instance) {
        for &slot in slots {
            let route = &sol.routes[slot];
            let rc = RouteCache::build(route, inst);
            let t = if route.is_empty() {
                RouteTerms::default()
            } else {
                route_terms(route.attr(), route.depart(), route.arrive(), consts, inst)
            };
            if slot >= self.routes.len() {
                self.routes.resize_with(slot + 1, || RouteCache {
                    n: 0,
                    table: Vec::new(),
                });
                self.terms.resize(slot + 1, RouteTerms::default());
            }
            self.routes[slot] = rc;
            self.terms[slot] = t;
            for (k, &c) in route.customers().iter().enumerate() {
                self.position[c] = (slot, k);
            }
        }
        self.counts = sol.routes_per_depot(inst);
    }

    /// Number of route slots covered.
    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    pub fn depot_count(&self, depot: usize) -> usize {
        self.counts[depot]
    }

    pub fn position(&self, customer: usize) -> Option<(usize, usize)> {
        match self.position[customer] {
            UNROUTED => None,
            p => Some(p),
        }
    }

    pub(crate) fn positions(&self) -> &[(usize, usize)] {
        &self.position
    }

    pub fn route_cache(&self, r: usize) -> &RouteCache {
        &self.routes[r]
    }

    /// Evaluation of the cached solution.
    pub fn evaluate(&self, penalties: &PenaltyState, consts: &ScalingConstants, inst: &Instance) -> EvalBreakdown {
        let mut dist = 0.0;
        let mut v = [0.0; 4];
        for t in &self.terms {
            dist += t.dist;
            for i in 0..4 {
                v[i] += t.v[i];
            }
        }
        for &c in &self.counts {
            v[3] += fleet_term(c, consts, inst);
        }
        EvalBreakdown::from_terms(dist, v, penalties)
    }

    pub fn view<'a>(&'a self, sol: &'a Solution) -> CachedSource<'a> {
        CachedSource { sol, cache: self }
    }
}

/// [`SegmentSource`] answering fragment queries in constant time.
pub struct CachedSource<'a> {
    sol: &'a Solution,
    cache: &'a SolutionCache,
}

impl SegmentSource for CachedSource<'_> {
    fn route(&self, r: usize) -> &Route {
        &self.sol.routes[r]
    }

    #[inline]
    fn run(&self, r: usize, start: usize, end: usize) -> SeqAttr {
        self.cache.routes[r].run(start, end)
    }

    fn terms(&self, r: usize) -> RouteTerms {
        self.cache.terms[r]
    }

    fn depot_count(&self, depot: usize) -> usize {
        self.cache.counts[depot]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FleetLimits, Node, Variant};

    #[test]
    fn run_table_matches_fold() {
        let depots = vec![Node::depot(0, 0.0, 0.0).with_window(0.0, 500.0)];
        let customers = (1..6)
            .map(|k| Node::customer(k, k as f64 * 3.0, (k * k) as f64, 1.0, 2.0).with_window(k as f64 * 10.0, 100.0))
            .collect();
        let limits = FleetLimits {
            vehicles_per_depot: None,
            capacity: 10.0,
            max_duration: None,
        };
        let inst = Instance::euclidean("c", Variant::Mdvrptw, depots, customers, limits).unwrap();
        let route = Route::new(0, 0, vec![3, 1, 5, 2, 4], &inst);
        let rc = RouteCache::build(&route, &inst);
        for s in 0..5 {
            for e in (s + 1)..=5 {
                let direct = SeqAttr::of_sequence(route.customers()[s..e].iter().copied(), &inst);
                assert_eq!(rc.run(s, e), direct);
            }
        }
    }
}
