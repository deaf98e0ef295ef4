use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mdfiha::eval::{evaluate, move_delta, PenaltyState, SeqAttr};
use mdfiha::localsearch::{enumerate, evaluate_batch, MoveOperator};
use mdfiha::model::simulate_route;
use mdfiha_bench::{fixture, VARIANTS};

fn route_evaluation(c: &mut Criterion) {
    let fx = fixture(mdfiha::model::Variant::Mdvrptw, 4, 200, 1);
    let route = fx.sol.routes.iter().max_by_key(|r| r.len()).unwrap();
    let nodes = route.nodes(&fx.inst);
    c.bench_function("concat/route", |b| {
        b.iter(|| SeqAttr::of_sequence(black_box(&nodes).iter().copied(), &fx.inst))
    });
    c.bench_function("simulate/route", |b| {
        b.iter(|| simulate_route(&fx.inst, black_box(&nodes)))
    });
    let pen = PenaltyState::new(0.5);
    c.bench_function("evaluate/solution", |b| {
        b.iter(|| evaluate(black_box(&fx.sol), &pen, &fx.consts, &fx.inst))
    });
}

fn move_evaluation(c: &mut Criterion) {
    let pen = PenaltyState::new(0.5);
    for variant in VARIANTS {
        let fx = fixture(variant, 4, 150, 2);
        let moves: Vec<_> = MoveOperator::enabled(&fx.inst)
            .into_iter()
            .flat_map(|op| enumerate(&fx.sol, op, &fx.nbr, &fx.inst))
            .collect();
        let sample: Vec<_> = moves.iter().step_by((moves.len() / 500).max(1)).copied().collect();
        c.bench_function(&format!("move_delta/{variant}"), |b| {
            b.iter(|| {
                for mv in &sample {
                    black_box(move_delta(&fx.sol, mv, &pen, &fx.consts, &fx.inst));
                }
            })
        });
        c.bench_function(&format!("batch/{variant}"), |b| {
            b.iter(|| evaluate_batch(&fx.sol, black_box(&moves), &pen, &fx.consts, &fx.inst))
        });
    }
}

criterion_group!(benches, route_evaluation, move_evaluation);
criterion_main!(benches);
