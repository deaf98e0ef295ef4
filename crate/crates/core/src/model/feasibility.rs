//! Ground-truth checks by direct forward simulation. Nothing here uses the
//! concatenation algebra, so these functions serve as oracles for it.

use super::{Instance, Route, Solution};

/// Excesses at or below this magnitude count as satisfied.
pub const FEAS_TOL: f64 = 1e-9;

/// Schedule of a route under wait-if-early semantics, starting at the
/// earliest departure time of the first node.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteSchedule {
    pub distance: f64,
    pub load: f64,
    /// Sum over visited nodes of `max(arrival - latest, 0)`.
    pub lateness: f64,
    /// Shortest achievable duration (departure delayed as far as the windows
    /// allow) when the route is punctual; the earliest-start duration otherwise.
    pub duration: f64,
}

/// Simulates a full node sequence (depots included).
pub fn simulate_route(inst: &Instance, nodes: &[usize]) -> RouteSchedule {
    let mut distance = 0.0;
    let mut load = 0.0;
    let mut lateness = 0.0;
    if nodes.is_empty() {
        return RouteSchedule {
            distance,
            load,
            lateness,
            duration: 0.0,
        };
    }
    let start = inst.node(nodes[0]).earliest;
    let mut clock = start;
    let mut waited = 0.0;
    // Largest departure delay that keeps every arrival on time.
    let mut slack = f64::INFINITY;
    let mut end = start;
    for (k, &v) in nodes.iter().enumerate() {
        let node = inst.node(v);
        if k > 0 {
            let u = nodes[k - 1];
            distance += inst.dist(u, v);
            clock += inst.time(u, v);
        }
        load += node.demand;
        let arrival = clock;
        if arrival > node.latest {
            lateness += arrival - node.latest;
        }
        slack = slack.min(node.latest - arrival + waited);
        if arrival < node.earliest {
            waited += node.earliest - arrival;
            clock = node.earliest;
        }
        clock += node.service;
        end = clock;
    }
    let mut duration = end - start;
    if lateness == 0.0 {
        duration -= slack.min(waited).max(0.0);
    }
    RouteSchedule {
        distance,
        load,
        lateness,
        duration,
    }
}

/// Outcome of [`check_feasible`]. Every list is empty for a feasible solution.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeasibilityReport {
    pub missing: Vec<usize>,
    pub duplicated: Vec<usize>,
    /// `(route index, load - Q)` for overloaded routes.
    pub capacity_excess: Vec<(usize, f64)>,
    /// `(route index, duration - D)` for routes exceeding the duration limit.
    pub duration_excess: Vec<(usize, f64)>,
    /// `(route index, summed lateness)` for routes missing a deadline.
    pub lateness: Vec<(usize, f64)>,
    /// Closed routes whose arrival depot differs from the departure depot.
    pub closure_violations: usize,
    /// `(depot, routes beyond the fleet size)`.
    pub fleet_excess: Vec<(usize, usize)>,
    /// Unknown node ids, depots in customer positions and similar defects.
    pub structural: Vec<String>,
}

impl FeasibilityReport {
    pub fn all_ok(&self) -> bool {
        self.coverage_ok() && self.constraints_ok() && self.structural.is_empty()
    }

    pub fn coverage_ok(&self) -> bool {
        self.missing.is_empty() && self.duplicated.is_empty()
    }

    /// Route constraints only, ignoring coverage.
    pub fn constraints_ok(&self) -> bool {
        self.capacity_excess.is_empty()
            && self.duration_excess.is_empty()
            && self.lateness.is_empty()
            && self.closure_violations == 0
            && self.fleet_excess.is_empty()
    }
}

fn route_structure(inst: &Instance, idx: usize, route: &Route, errs: &mut Vec<String>) -> bool {
    let mut ok = true;
    let n = inst.num_nodes();
    for (what, d) in [("depart", route.depart()), ("arrive", route.arrive())] {
        if d >= n {
            errs.push(format!("route {idx}: unknown {what} node {d}"));
            ok = false;
        } else if !inst.is_depot(d) {
            errs.push(format!("route {idx}: {what} node {d} is not a depot"));
            ok = false;
        }
    }
    for &c in route.customers() {
        if c >= n {
            errs.push(format!("route {idx}: unknown node {c}"));
            ok = false;
        } else if !inst.is_customer(c) {
            errs.push(format!("route {idx}: node {c} is not a customer"));
            ok = false;
        }
    }
    ok
}

pub fn check_feasible(sol: &Solution, inst: &Instance) -> FeasibilityReport {
    let mut report = FeasibilityReport::default();
    let mut visits = vec![0usize; inst.num_nodes()];
    let mut per_depot = vec![0usize; inst.num_depots()];
    for (idx, route) in sol.routes.iter().enumerate() {
        if route.is_empty() {
            continue;
        }
        if !route_structure(inst, idx, route, &mut report.structural) {
            continue;
        }
        per_depot[route.depart()] += 1;
        for &c in route.customers() {
            visits[c] += 1;
        }
        let nodes = route.nodes(inst);
        let sched = simulate_route(inst, &nodes);
        if sched.load - inst.capacity() > FEAS_TOL {
            report.capacity_excess.push((idx, sched.load - inst.capacity()));
        }
        if let Some(limit) = inst.max_duration() {
            if sched.duration - limit > FEAS_TOL {
                report.duration_excess.push((idx, sched.duration - limit));
            }
        }
        if sched.lateness > FEAS_TOL {
            report.lateness.push((idx, sched.lateness));
        }
        if !inst.open_routes() && route.depart() != route.arrive() {
            report.closure_violations += 1;
        }
    }
    for c in inst.customers() {
        match visits[c] {
            0 => report.missing.push(c),
            1 => {}
            _ => report.duplicated.push(c),
        }
    }
    if let Some(limit) = inst.fleet_per_depot() {
        for (d, &count) in per_depot.iter().enumerate() {
            if count > limit {
                report.fleet_excess.push((d, count - limit));
            }
        }
    }
    report
}

/// Time-warp forward simulation from a chosen start time at the first node:
/// early arrivals wait, late arrivals are clamped to the deadline and the
/// overshoot is accumulated. Returns `(duration incl. waiting, time warp)`.
pub fn warp_schedule(inst: &Instance, nodes: &[usize], start: f64) -> (f64, f64) {
    let mut clock = start;
    let mut duration = 0.0;
    let mut warp = 0.0;
    for (k, &v) in nodes.iter().enumerate() {
        let node = inst.node(v);
        if k > 0 {
            let t = inst.time(nodes[k - 1], v);
            clock += t;
            duration += t;
        }
        if clock < node.earliest {
            duration += node.earliest - clock;
            clock = node.earliest;
        }
        if clock > node.latest {
            warp += clock - node.latest;
            clock = node.latest;
        }
        clock += node.service;
        duration += node.service;
    }
    (duration, warp)
}

/// Six-field profile of an arbitrary node sequence computed by brute-force
/// simulation: the minimum duration and time warp, and the earliest and
/// latest first-visit starts between which both minima are attained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SequenceProfile {
    pub dist: f64,
    pub load: f64,
    pub duration: f64,
    pub earliest: f64,
    pub latest: f64,
    pub time_warp: f64,
}

pub fn sequence_profile(inst: &Instance, nodes: &[usize]) -> SequenceProfile {
    let dist = nodes.windows(2).map(|w| inst.dist(w[0], w[1])).sum();
    let load = nodes.iter().map(|&v| inst.node(v).demand).sum();
    // Starting before every window opens leaves the warp at its minimum and
    // inflates the duration one-for-one; starting after the tightest deadline
    // does the converse. Both probes are exact for piecewise-linear profiles.
    let first = inst.node(nodes[0]);
    let t_low = first.earliest - 1.0;
    let (dur_low, warp_low) = warp_schedule(inst, nodes, t_low);
    let mut horizon = f64::NEG_INFINITY;
    let mut span = 1.0;
    let mut any_deadline = false;
    for (k, &v) in nodes.iter().enumerate() {
        let node = inst.node(v);
        horizon = horizon.max(node.earliest);
        if node.latest.is_finite() {
            horizon = horizon.max(node.latest);
            any_deadline = true;
        }
        span += node.service;
        if k > 0 {
            span += inst.time(nodes[k - 1], v);
        }
    }
    let t_high = horizon + span;
    let (duration, warp_high) = warp_schedule(inst, nodes, t_high);
    let latest = if any_deadline {
        t_high - (warp_high - warp_low)
    } else {
        f64::INFINITY
    };
    let earliest = t_low + (dur_low - duration);
    SequenceProfile {
        dist,
        load,
        duration,
        earliest,
        latest,
        time_warp: warp_low,
    }
}
