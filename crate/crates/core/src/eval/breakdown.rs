use std::ops::{Add, AddAssign, Sub};

use crate::model::{Instance, Solution};

use super::{PenaltyState, ScalingConstants, SeqAttr};

/// Penalty magnitudes below this are treated as satisfied.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Distance and the four normalised violation terms of one route, without
/// the per-depot fleet part of the depot term.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RouteTerms {
    pub dist: f64,
    pub v: [f64; 4],
}

pub fn route_terms(
    attr: &SeqAttr,
    depart: usize,
    arrive: usize,
    consts: &ScalingConstants,
    inst: &Instance,
) -> RouteTerms {
    if attr.is_empty() {
        return RouteTerms::default();
    }
    let mut v = [0.0; 4];
    if inst.variant().has_time_windows() {
        v[0] = consts.gamma * attr.time_warp;
    }
    let q = inst.capacity();
    v[1] = consts.theta * (attr.load - q).max(0.0) / q;
    if let Some(d) = inst.max_duration() {
        v[2] = consts.theta * (attr.duration - d).max(0.0) / d;
    }
    if !inst.open_routes() && depart != arrive {
        v[3] = consts.theta;
    }
    RouteTerms { dist: attr.dist, v }
}

/// Fleet part of the depot term for one depot.
#[inline]
pub fn fleet_term(count: usize, consts: &ScalingConstants, inst: &Instance) -> f64 {
    match inst.fleet_per_depot() {
        Some(n) if count > n => consts.theta * (count - n) as f64,
        _ => 0.0,
    }
}

/// Value of the penalised evaluation, or a difference of two such values.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EvalBreakdown {
    pub dist: f64,
    pub v: [f64; 4],
    pub f: f64,
}

impl EvalBreakdown {
    pub fn from_terms(dist: f64, v: [f64; 4], penalties: &PenaltyState) -> Self {
        let f = dist + (0..4).map(|i| penalties.lambda[i] * v[i]).sum::<f64>();
        EvalBreakdown { dist, v, f }
    }

    pub fn violated(&self) -> [bool; 4] {
        self.v.map(|x| x > VIOLATION_TOL)
    }

    pub fn is_feasible(&self) -> bool {
        !self.violated().iter().any(|&b| b)
    }
}

impl Add for EvalBreakdown {
    type Output = EvalBreakdown;
    fn add(mut self, o: EvalBreakdown) -> EvalBreakdown {
        self += o;
        self
    }
}

impl AddAssign for EvalBreakdown {
    fn add_assign(&mut self, o: EvalBreakdown) {
        self.dist += o.dist;
        for i in 0..4 {
            self.v[i] += o.v[i];
        }
        self.f += o.f;
    }
}

impl Sub for EvalBreakdown {
    type Output = EvalBreakdown;
    fn sub(self, o: EvalBreakdown) -> EvalBreakdown {
        EvalBreakdown {
            dist: self.dist - o.dist,
            v: [0, 1, 2, 3].map(|i| self.v[i] - o.v[i]),
            f: self.f - o.f,
        }
    }
}

/// Penalised evaluation of a whole solution from the routes' cached attributes.
pub fn evaluate(sol: &Solution, penalties: &PenaltyState, consts: &ScalingConstants, inst: &Instance) -> EvalBreakdown {
    let mut dist = 0.0;
    let mut v = [0.0; 4];
    for r in sol.routes.iter().filter(|r| !r.is_empty()) {
        let t = route_terms(r.attr(), r.depart(), r.arrive(), consts, inst);
        dist += t.dist;
        for i in 0..4 {
            v[i] += t.v[i];
        }
    }
    for count in sol.routes_per_depot(inst) {
        v[3] += fleet_term(count, consts, inst);
    }
    EvalBreakdown::from_terms(dist, v, penalties)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::scaling_constants;
    use crate::model::{check_feasible, FleetLimits, Node, Route, Variant};

    fn inst() -> Instance {
        let depots = vec![Node::depot(0, 0.0, 0.0), Node::depot(1, 10.0, 0.0)];
        let customers = vec![
            Node::customer(2, 0.0, 5.0, 6.0, 0.0),
            Node::customer(3, 10.0, 5.0, 5.0, 0.0),
            Node::customer(4, 5.0, 5.0, 4.0, 0.0),
        ];
        let limits = FleetLimits {
            vehicles_per_depot: Some(1),
            capacity: 10.0,
            max_duration: Some(30.0),
        };
        Instance::euclidean("e", Variant::Mdvrp, depots, customers, limits).unwrap()
    }

    #[test]
    fn feasible_has_no_penalty() {
        let i = inst();
        let k = scaling_constants(&i).unwrap();
        let sol = Solution::new(vec![Route::new(0, 0, vec![2], &i), Route::new(1, 1, vec![3, 4], &i)]);
        let e = evaluate(&sol, &PenaltyState::default(), &k, &i);
        assert_eq!(e.v, [0.0; 4]);
        assert_eq!(e.f, e.dist);
        assert!(check_feasible(&sol, &i).all_ok());
    }

    #[test]
    fn capacity_term() {
        let i = inst();
        let k = ScalingConstants {
            gamma: 1.0,
            theta: 19.0,
        };
        // load 6 + 5 + 4 = 15 on Q = 10
        let r = Route::new(0, 0, vec![2, 3, 4], &i);
        let t = route_terms(r.attr(), 0, 0, &k, &i);
        assert!((t.v[1] - 9.5).abs() < 1e-12);
    }

    #[test]
    fn depot_term_counts_closure_and_fleet() {
        let i = inst();
        let k = scaling_constants(&i).unwrap();
        let sol = Solution::new(vec![Route::new(0, 1, vec![2], &i), Route::new(0, 0, vec![3, 4], &i)]);
        let e = evaluate(&sol, &PenaltyState::default(), &k, &i);
        assert!((e.v[3] - 2.0 * k.theta).abs() < 1e-12);
        assert!(e.f > e.dist);
    }
}
