//! Oracles shared by the integration tests. Nothing here goes through the
//! concatenation algebra or the move machinery.

#![allow(dead_code)]

use mdfiha::eval::{EvalBreakdown, PenaltyState, ScalingConstants};
use mdfiha::model::{objective, sequence_profile, simulate_route, Instance, Solution, FEAS_TOL};

/// Penalised evaluation recomputed by schedule simulation.
pub fn oracle_eval(sol: &Solution, pen: &PenaltyState, k: &ScalingConstants, inst: &Instance) -> EvalBreakdown {
    let mut v = [0.0; 4];
    let mut counts = vec![0usize; inst.num_depots()];
    for r in sol.routes.iter().filter(|r| !r.is_empty()) {
        let p = sequence_profile(inst, &r.nodes(inst));
        if inst.variant().has_time_windows() {
            v[0] += k.gamma * p.time_warp;
        }
        v[1] += k.theta * (p.load - inst.capacity()).max(0.0) / inst.capacity();
        if let Some(d) = inst.max_duration() {
            v[2] += k.theta * (p.duration - d).max(0.0) / d;
        }
        if !inst.open_routes() && r.depart() != r.arrive() {
            v[3] += k.theta;
        }
        counts[r.depart()] += 1;
    }
    if let Some(n) = inst.fleet_per_depot() {
        v[3] += counts
            .iter()
            .map(|&c| k.theta * c.saturating_sub(n) as f64)
            .sum::<f64>();
    }
    EvalBreakdown::from_terms(objective(sol, inst), v, pen)
}

fn permutations(items: &[usize], f: &mut impl FnMut(&[usize])) {
    fn go(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            go(v, k + 1, f);
            v.swap(k, i);
        }
    }
    go(&mut items.to_vec(), 0, f);
}

/// Cheapest feasible single route over exactly `customers` from `depot`.
fn best_route(inst: &Instance, depot: usize, customers: &[usize]) -> Option<f64> {
    let mut best: Option<f64> = None;
    permutations(customers, &mut |perm| {
        let mut nodes = vec![depot];
        nodes.extend_from_slice(perm);
        if !inst.open_routes() {
            nodes.push(depot);
        }
        let s = simulate_route(inst, &nodes);
        let ok = s.load - inst.capacity() <= FEAS_TOL
            && inst.max_duration().is_none_or(|d| s.duration - d <= FEAS_TOL)
            && s.lateness <= FEAS_TOL;
        if ok && best.is_none_or(|b| s.distance < b) {
            best = Some(s.distance);
        }
    });
    best
}

/// Exact optimum by exhaustive enumeration of routes and partitions. Meant
/// for at most 7 customers and 2 or 3 depots. `None` when nothing is feasible.
pub fn brute_force_optimum(inst: &Instance) -> Option<f64> {
    let cs: Vec<usize> = inst.customers().collect();
    let n = cs.len();
    let nd = inst.num_depots();
    assert!(n <= 8 && nd <= 3, "instance too large for exhaustive search");
    let full = (1usize << n) - 1;
    // route[mask * nd + d]
    let mut route = vec![None; (full + 1) * nd];
    for mask in 1..=full {
        let sub: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| cs[i]).collect();
        for d in 0..nd {
            route[mask * nd + d] = best_route(inst, d, &sub);
        }
    }
    let cap = inst.fleet_per_depot().unwrap_or(n).min(n);
    // dp over (covered mask, routes used per depot), counts packed base cap+1
    let base = cap + 1;
    let states = base.pow(nd as u32);
    let mut dp = vec![f64::INFINITY; (full + 1) * states];
    dp[0] = 0.0;
    for mask in 0..full {
        let low = (!mask & full).trailing_zeros() as usize;
        let rest = !mask & full;
        for st in 0..states {
            let cur = dp[mask * states + st];
            if cur.is_infinite() {
                continue;
            }
            // sub-masks of the uncovered customers that contain `low`
            let mut sub = rest;
            while sub > 0 {
                if sub >> low & 1 == 1 {
                    for d in 0..nd {
                        let used = st / base.pow(d as u32) % base;
                        if used == cap {
                            continue;
                        }
                        if let Some(c) = route[sub * nd + d] {
                            let nst = st + base.pow(d as u32);
                            let slot = &mut dp[(mask | sub) * states + nst];
                            if cur + c < *slot {
                                *slot = cur + c;
                            }
                        }
                    }
                }
                sub = (sub - 1) & rest;
            }
        }
    }
    let best = dp[full * states..].iter().copied().fold(f64::INFINITY, f64::min);
    best.is_finite().then_some(best)
}
