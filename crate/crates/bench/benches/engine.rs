use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use mret_bench::random_instance;
use mret_core::solvers::EXACT_SCHEDULE_LIMIT;
use mret_core::{
    evaluate_schedule, gen_fig3, gen_random_sc, greedy_pair, solve_exact, Temporalisation,
};
use std::hint::black_box;

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_schedule");
    group.sample_size(20);
    for (nodes, edges) in [(1_000, 10_000), (10_000, 100_000)] {
        let (g, s) = random_instance(nodes, edges, 1);
        group.bench_function(format!("{nodes}n_{edges}e"), |b| {
            b.iter(|| {
                evaluate_schedule(black_box(&g), black_box(&s))
                    .unwrap()
                    .total()
            })
        });
    }
    group.finish();
}

fn tie_breaking(c: &mut Criterion) {
    let (_, s) = random_instance(2_000, 20_000, 2);
    c.bench_function("to_schedule_20k", |b| {
        b.iter_batched(
            || Temporalisation::from_schedule(&s),
            |t| t.to_schedule(),
            BatchSize::SmallInput,
        )
    });
}

fn exact_search(c: &mut Criterion) {
    let g = gen_random_sc(5, 3, 3).unwrap();
    let mut group = c.benchmark_group("solve_exact");
    group.sample_size(10);
    group.bench_function("8_edges", |b| {
        b.iter(|| solve_exact(black_box(&g), EXACT_SCHEDULE_LIMIT).unwrap())
    });
    group.finish();
}

fn arborescences(c: &mut Criterion) {
    let (fig, _) = gen_fig3(4).unwrap();
    let g = gen_random_sc(500, 1_500, 4).unwrap();
    c.bench_function("greedy_pair_fig3_k4", |b| {
        b.iter(|| greedy_pair(black_box(&fig), 0, 1).unwrap())
    });
    c.bench_function("greedy_pair_500n", |b| {
        b.iter(|| greedy_pair(black_box(&g), 0, 1).unwrap())
    });
}

criterion_group!(
    benches,
    evaluation,
    tie_breaking,
    exact_search,
    arborescences
);
criterion_main!(benches);
