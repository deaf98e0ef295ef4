use std::time::Duration;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use mdfiha::engine::{run, EngineConfig};
use mdfiha::eval::PenaltyState;
use mdfiha::localsearch::{SearchConfig, Searcher};
use mdfiha_bench::{fixture, rng, VARIANTS};

fn local_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    for variant in VARIANTS {
        let fx = fixture(variant, 4, 100, 3);
        for multi_move in [true, false] {
            let searcher = Searcher::new(&fx.inst, &fx.consts, &fx.nbr, SearchConfig { depth: 200, multi_move });
            let tag = if multi_move { "multi" } else { "single" };
            g.bench_function(format!("{variant}/{tag}"), |b| {
                b.iter_batched(
                    || fx.sol.clone(),
                    |sol| searcher.run(sol, &mut PenaltyState::new(0.5), &mut rng(7)),
                    BatchSize::SmallInput,
                )
            });
        }
    }
    g.finish();
}

fn generations(c: &mut Criterion) {
    let mut g = c.benchmark_group("engine");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    let fx = fixture(mdfiha::model::Variant::Mdvrp, 4, 50, 4);
    let cfg = EngineConfig {
        max_generations: 10,
        ..Default::default()
    };
    g.bench_function("mdvrp/10-generations", |b| b.iter(|| run(&fx.inst, &cfg).unwrap()));
    g.finish();
}

criterion_group!(benches, local_search, generations);
criterion_main!(benches);
