//! Random instances and solutions for tests, benchmarks and demos.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{FleetLimits, Instance, Node, Route, Solution, Variant};

/// Uniform random instance on a 100 x 100 square. Time-window instances get
/// windows of random width inside a 1000-unit horizon.
pub fn random_instance<R: Rng>(variant: Variant, depots: usize, customers: usize, rng: &mut R) -> Instance {
    let horizon = 1000.0;
    let ds = (0..depots)
        .map(|k| Node::depot(k + 1, rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)).with_window(0.0, horizon))
        .collect();
    let cs = (0..customers)
        .map(|k| {
            let c = Node::customer(
                depots + k + 1,
                rng.gen_range(0.0..100.0),
                rng.gen_range(0.0..100.0),
                rng.gen_range(1..=20) as f64,
                rng.gen_range(0..=10) as f64,
            );
            let start = rng.gen_range(0.0..horizon * 0.7);
            let width = rng.gen_range(20.0..250.0);
            c.with_window(start, (start + width).min(horizon))
        })
        .collect();
    let limits = FleetLimits {
        vehicles_per_depot: Some(customers.div_ceil(3 * depots).max(1)),
        capacity: 50.0,
        max_duration: Some(if variant.has_time_windows() { horizon } else { 300.0 }),
    };
    Instance::euclidean(format!("rand-{variant}-{depots}x{customers}"), variant, ds, cs, limits)
        .expect("generated instance is valid")
}

/// Random routing of all customers: random order, random cuts, random depot
/// endpoints (closure violations included).
pub fn random_solution<R: Rng>(inst: &Instance, rng: &mut R) -> Solution {
    let mut cs: Vec<usize> = inst.customers().collect();
    cs.shuffle(rng);
    let mut routes = Vec::new();
    let mut rest = &cs[..];
    while !rest.is_empty() {
        let take = rng.gen_range(1..=rest.len().min(6));
        let (head, tail) = rest.split_at(take);
        let depart = rng.gen_range(0..inst.num_depots());
        let arrive = if rng.gen_bool(0.7) {
            depart
        } else {
            rng.gen_range(0..inst.num_depots())
        };
        routes.push(Route::new(depart, arrive, head.to_vec(), inst));
        rest = tail;
    }
    Solution::new(routes)
}
