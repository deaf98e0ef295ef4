use crate::eval::SeqAttr;

use super::Instance;

/// One vehicle tour. `arrive` is kept equal to `depart` for open-route
/// instances and ignored by every evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Route {
    depart: usize,
    arrive: usize,
    customers: Vec<usize>,
    attr: SeqAttr,
}

impl Route {
    pub fn new(depart: usize, arrive: usize, customers: Vec<usize>, inst: &Instance) -> Self {
        let arrive = if inst.open_routes() { depart } else { arrive };
        let attr = Self::compute_attr(depart, arrive, &customers, inst);
        Route {
            depart,
            arrive,
            customers,
            attr,
        }
    }

    fn compute_attr(depart: usize, arrive: usize, customers: &[usize], inst: &Instance) -> SeqAttr {
        let mut attr = SeqAttr::single(depart, inst);
        for &c in customers {
            attr = attr.then(&SeqAttr::single(c, inst), inst);
        }
        if !inst.open_routes() {
            attr = attr.then(&SeqAttr::single(arrive, inst), inst);
        }
        attr
    }

    pub fn depart(&self) -> usize {
        self.depart
    }

    pub fn arrive(&self) -> usize {
        self.arrive
    }

    pub fn customers(&self) -> &[usize] {
        &self.customers
    }

    pub fn len(&self) -> usize {
        self.customers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.customers.is_empty()
    }

    /// Cached attributes of the whole tour, depots included.
    pub fn attr(&self) -> &SeqAttr {
        &self.attr
    }

    pub fn load(&self) -> f64 {
        self.attr.load
    }

    /// Full node sequence: depart depot, customers, arrival depot (omitted for
    /// open routes).
    pub fn nodes(&self, inst: &Instance) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.customers.len() + 2);
        v.push(self.depart);
        v.extend_from_slice(&self.customers);
        if !inst.open_routes() {
            v.push(self.arrive);
        }
        v
    }

    pub fn is_closed_consistently(&self, inst: &Instance) -> bool {
        inst.open_routes() || self.depart == self.arrive
    }
}

/// Bookkeeping carried with a solution; never affects evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolutionMeta {
    pub generation: u64,
    pub lineage: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub meta: SolutionMeta,
}

impl Solution {
    pub fn new(routes: Vec<Route>) -> Self {
        let mut s = Solution {
            routes,
            meta: SolutionMeta::default(),
        };
        s.remove_empty_routes();
        s
    }

    pub fn remove_empty_routes(&mut self) {
        self.routes.retain(|r| !r.is_empty());
    }

    pub fn num_routes(&self) -> usize {
        self.routes.len()
    }

    /// Routes departing from each depot.
    pub fn routes_per_depot(&self, inst: &Instance) -> Vec<usize> {
        let mut counts = vec![0; inst.num_depots()];
        for r in self.routes.iter().filter(|r| !r.is_empty()) {
            counts[r.depart()] += 1;
        }
        counts
    }

    /// Occurrence count of every node index across all routes.
    pub fn visit_counts(&self, inst: &Instance) -> Vec<usize> {
        let mut counts = vec![0; inst.num_nodes()];
        for r in &self.routes {
            for &c in r.customers() {
                if c < counts.len() {
                    counts[c] += 1;
                }
            }
        }
        counts
    }

    /// True when every customer is routed exactly once.
    pub fn covers_exactly_once(&self, inst: &Instance) -> bool {
        let counts = self.visit_counts(inst);
        inst.customers().all(|c| counts[c] == 1)
            && self
                .routes
                .iter()
                .flat_map(|r| r.customers())
                .all(|&c| inst.is_customer(c))
    }

    /// Canonical form used for equality of route sets: routes sorted by their
    /// node sequences.
    pub fn canonical_routes(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let mut v: Vec<_> = self
            .routes
            .iter()
            .map(|r| (r.depart(), r.arrive(), r.customers().to_vec()))
            .collect();
        v.sort();
        v
    }
}

/// Sum of arc distances along a route; open routes omit the return arc.
/// Distance of one route; an empty route is an unused vehicle and costs nothing.
pub fn route_distance(route: &Route, inst: &Instance) -> f64 {
    if route.is_empty() {
        return 0.0;
    }
    let nodes = route.nodes(inst);
    nodes.windows(2).map(|w| inst.dist(w[0], w[1])).fold(0.0, |a, b| a + b)
}

/// Total travelled distance.
pub fn objective(sol: &Solution, inst: &Instance) -> f64 {
    sol.routes
        .iter()
        .map(|r| route_distance(r, inst))
        .fold(0.0, |a, b| a + b)
}
