use mdfiha::eval::{
    evaluate, finish_delta, move_delta, move_route_delta, scaling_constants, DirectSource, PenaltyState, SeqAttr,
    LAMBDA_MAX, LAMBDA_MIN,
};
use mdfiha::genetic::{remove_redundant, repair_insert, unrouted, BanditState, InsertCtx, InsertionOperator};
use mdfiha::localsearch::{apply_moves, enumerate, Move, MoveOperator, SolutionCache};
use mdfiha::model::{check_feasible, Route, Solution, Variant};
use mdfiha::neighborhood::{NeighborConfig, NeighborLists};
use mdfiha::population::solution_distance;
use mdfiha::synth::{random_instance, random_solution};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Mdvrp), Just(Variant::Mdvrptw), Just(Variant::Mdovrp)]
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * (1.0 + a.abs().max(b.abs())) || (a.is_infinite() && a == b)
}

fn attr_close(a: &SeqAttr, b: &SeqAttr) -> bool {
    close(a.dist, b.dist)
        && close(a.load, b.load)
        && close(a.duration, b.duration)
        && close(a.earliest, b.earliest)
        && close(a.latest, b.latest)
        && close(a.time_warp, b.time_warp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concatenation_is_associative(v in variant(), seed in any::<u64>(), cuts in (1usize..6, 1usize..6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(v, 2, 14, &mut rng);
        let mut nodes: Vec<usize> = inst.customers().collect();
        nodes.shuffle(&mut rng);
        let (i, j) = (cuts.0, cuts.0 + cuts.1);
        let seq = |r: &[usize]| SeqAttr::of_sequence(r.iter().copied(), &inst);
        let (a, b, c) = (seq(&nodes[..i]), seq(&nodes[i..j]), seq(&nodes[j..]));
        let left = a.then(&b, &inst).then(&c, &inst);
        let right = a.then(&b.then(&c, &inst), &inst);
        prop_assert!(attr_close(&left, &right), "{left:?} vs {right:?}");
        prop_assert!(attr_close(&left, &seq(&nodes)));
        prop_assert!(attr_close(&a.then(&SeqAttr::EMPTY, &inst), &a));
    }

    #[test]
    fn penalties_stay_in_bounds(kappa in 0.05f64..0.95, steps in prop::collection::vec(any::<[bool; 4]>(), 0..400)) {
        let mut p = PenaltyState::new(kappa);
        for s in steps {
            let before = p.lambda;
            p.adapt(s);
            for i in 0..4 {
                prop_assert!((LAMBDA_MIN..=LAMBDA_MAX).contains(&p.lambda[i]));
                if s[i] {
                    prop_assert!(p.lambda[i] >= before[i]);
                } else {
                    prop_assert!(p.lambda[i] <= before[i]);
                }
            }
        }
    }

    #[test]
    fn bandit_counts_and_choices(gamma in 0.5f64..=1.0, rewards in prop::collection::vec(-50.0f64..50.0, 1..200), k in 1usize..7) {
        let mut b = BanditState::new(k, gamma);
        for (t, r) in rewards.iter().enumerate() {
            let a = b.select();
            prop_assert!(a < k);
            if t < k {
                prop_assert_eq!(a, t, "every arm is tried once first");
            }
            b.update(a, *r);
            let total: f64 = b.counts.iter().sum();
            let expect = if gamma == 1.0 { (t + 1) as f64 } else { (1.0 - gamma.powi(t as i32 + 1)) / (1.0 - gamma) };
            prop_assert!((total - expect).abs() < 1e-6 * expect.max(1.0));
        }
    }

    #[test]
    fn solution_distance_is_a_symmetric_percentage(v in variant(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(v, 3, 12, &mut rng);
        let a = random_solution(&inst, &mut rng);
        let b = random_solution(&inst, &mut rng);
        let d = solution_distance(&a, &b, &inst);
        prop_assert_eq!(d, solution_distance(&b, &a, &inst));
        prop_assert!((0.0..=100.0).contains(&d));
        prop_assert_eq!(solution_distance(&a, &a, &inst), 0.0);
    }

    #[test]
    fn cached_and_direct_deltas_agree(v in variant(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(v, 3, 16, &mut rng);
        let k = scaling_constants(&inst).unwrap();
        let nbr = NeighborLists::build(&inst, &NeighborConfig { theta: 8, ..Default::default() }, &k);
        let sol = random_solution(&inst, &mut rng);
        let pen = PenaltyState { lambda: [rng.gen_range(0.1..5.0), 1.0, 2.0, 0.5], ..Default::default() };
        let cache = SolutionCache::new(&sol, &k, &inst);
        let view = cache.view(&sol);
        let direct = DirectSource::new(&sol, &k, &inst);
        let counts = sol.routes_per_depot(&inst);
        for op in MoveOperator::ALL {
            for mv in enumerate(&sol, op, &nbr, &inst).choose_multiple(&mut rng, 20) {
                let full = move_delta(&sol, mv, &pen, &k, &inst);
                for rd in [move_route_delta(mv, &sol, &view, &k, &inst), move_route_delta(mv, &sol, &direct, &k, &inst)] {
                    let (d, _) = finish_delta(&rd, |dep| counts[dep], &pen, &k, &inst);
                    prop_assert!(close(d.f, full.f), "{mv:?}: {} vs {}", d.f, full.f);
                    prop_assert!(close(d.dist, full.dist));
                }
            }
        }
    }

    #[test]
    fn repair_restores_exact_coverage(v in variant(), seed in any::<u64>(), op in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(v, 2, 15, &mut rng);
        let k = scaling_constants(&inst).unwrap();
        let pen = PenaltyState::default();
        // Duplicate some visits and drop others.
        let base = random_solution(&inst, &mut rng);
        let mut routes: Vec<Route> = base.routes.clone();
        let extra = random_solution(&inst, &mut rng);
        routes.extend(extra.routes.into_iter().take(2));
        let mut sol = Solution::new(routes);
        if let Some(r) = sol.routes.first().cloned() {
            let kept: Vec<usize> = r.customers().iter().copied().skip(1).collect();
            sol.routes[0] = Route::new(r.depart(), r.arrive(), kept, &inst);
        }
        let keep = vec![false; sol.routes.len()];
        remove_redundant(&mut sol, &keep, &inst);
        let missing = unrouted(&sol, &inst);
        let ctx = InsertCtx { inst: &inst, consts: &k, penalties: &pen };
        repair_insert(&mut sol, &missing, InsertionOperator::ALL[op], &ctx, &mut rng);
        prop_assert!(sol.covers_exactly_once(&inst));
        prop_assert!(check_feasible(&sol, &inst).coverage_ok());
    }

    #[test]
    fn enumerated_moves_apply_cleanly(v in variant(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(v, 2, 12, &mut rng);
        let k = scaling_constants(&inst).unwrap();
        let nbr = NeighborLists::build(&inst, &NeighborConfig { theta: 5, ..Default::default() }, &k);
        let sol = random_solution(&inst, &mut rng);
        let before = canon(&sol);
        for op in MoveOperator::ALL {
            for mv in enumerate(&sol, op, &nbr, &inst) {
                prop_assert_eq!(mv.operator(), op);
                let after = apply_moves(&sol, &[mv], &inst).unwrap();
                prop_assert!(after.covers_exactly_once(&inst));
                prop_assert_ne!(canon(&after), before.clone(), "{:?} is the identity", mv);
            }
        }
    }
}

fn canon(sol: &Solution) -> Vec<(usize, usize, Vec<usize>)> {
    let mut c = sol.canonical_routes();
    c.retain(|r| !r.2.is_empty());
    c
}

/// Every single-customer or pair relocation and every route-tail exchange,
/// listed without any neighborhood restriction.
fn exhaustive(sol: &Solution, op: MoveOperator) -> Vec<Move> {
    let m = sol.routes.len();
    let mut out = Vec::new();
    for from in 0..m {
        for to in 0..m {
            let (nf, nt) = (sol.routes[from].len(), sol.routes[to].len());
            match op {
                MoveOperator::Relocate => {
                    for start in 0..nf {
                        for len in 1..=2.min(nf - start) {
                            for pos in 0..=nt {
                                if from == to && pos >= start && pos <= start + len {
                                    continue;
                                }
                                out.push(Move::Relocate {
                                    from,
                                    start,
                                    len,
                                    reversed: false,
                                    to,
                                    pos,
                                });
                            }
                        }
                    }
                }
                MoveOperator::TwoOptStar if from < to => {
                    for cut1 in 0..=nf {
                        for cut2 in 0..=nt {
                            out.push(Move::TwoOptStar {
                                r1: from,
                                cut1,
                                r2: to,
                                cut2,
                            });
                        }
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// With complete neighbor lists and no time windows, the granular
/// enumeration reaches every solution the unrestricted one reaches.
#[test]
fn full_lists_reach_every_neighbor() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for v in [Variant::Mdvrp, Variant::Mdovrp] {
        for _ in 0..5 {
            let inst = random_instance(v, 2, 10, &mut rng);
            let k = scaling_constants(&inst).unwrap();
            let nbr = NeighborLists::build(
                &inst,
                &NeighborConfig {
                    theta: 10,
                    ..Default::default()
                },
                &k,
            );
            let sol = random_solution(&inst, &mut rng);
            let before = canon(&sol);
            for op in [MoveOperator::Relocate, MoveOperator::TwoOptStar] {
                let reached: std::collections::HashSet<_> = enumerate(&sol, op, &nbr, &inst)
                    .iter()
                    .map(|mv| canon(&apply_moves(&sol, &[*mv], &inst).unwrap()))
                    .collect();
                for mv in exhaustive(&sol, op) {
                    let target = canon(&apply_moves(&sol, &[mv], &inst).unwrap());
                    if target != before {
                        assert!(reached.contains(&target), "{v} {mv:?} not reachable");
                    }
                }
            }
        }
    }
}

#[test]
fn evaluation_is_distance_when_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let inst = random_instance(Variant::Mdvrp, 2, 6, &mut rng);
    let k = scaling_constants(&inst).unwrap();
    let sol = Solution::new(inst.customers().map(|c| Route::new(0, 0, vec![c], &inst)).collect());
    let e = evaluate(&sol, &PenaltyState::default(), &k, &inst);
    assert_eq!(e.is_feasible(), check_feasible(&sol, &inst).all_ok());
}
