use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use probetree::bounds::{find_bounds, BoundClass, SearchOptions};
use probetree::canon::Canonize;
use probetree::cliquewidth::cwd_at_most;
use probetree::cographs::is_p_cograph;
use probetree::fixtures::cw4_pp_term;
use probetree::{decide_ibo, decide_ibo_oracle};
use probetree_bench::{graphs, oracle_inputs, tree_structures};

fn deciders(c: &mut Criterion) {
    let trees = tree_structures(1, 64, 14);
    c.bench_function("decide_ibo/tree structures", |b| {
        b.iter(|| {
            trees
                .iter()
                .filter(|s| decide_ibo(black_box(s)).is_some())
                .count()
        })
    });
    let small = oracle_inputs(2, 32, 5);
    c.bench_function("decide_ibo/5 elements", |b| {
        b.iter(|| {
            small
                .iter()
                .filter(|s| decide_ibo(black_box(s)).is_some())
                .count()
        })
    });
    c.bench_function("decide_ibo_oracle/5 elements", |b| {
        b.iter(|| {
            small
                .iter()
                .filter(|s| decide_ibo_oracle(black_box(s)).unwrap().is_some())
                .count()
        })
    });
}

fn graphs_and_forms(c: &mut Criterion) {
    let gs = graphs(3, 64, 8, 0.5);
    c.bench_function("canonical_form/8-vertex graphs", |b| {
        b.iter(|| {
            gs.iter().for_each(|g| {
                black_box(g.canonical_form().unwrap());
            })
        })
    });
    c.bench_function("is_p_cograph/8-vertex graphs", |b| {
        b.iter(|| gs.iter().filter(|g| is_p_cograph(black_box(g))).count())
    });
}

fn searches(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("bounds pp 5", |b| {
        b.iter(|| find_bounds(BoundClass::Pp, 5, &SearchOptions::default()).unwrap())
    });
    group.bench_function("bounds p 7", |b| {
        b.iter(|| find_bounds(BoundClass::P, 7, &SearchOptions::default()).unwrap())
    });
    group.bench_function("bounds ibo 4", |b| {
        b.iter(|| find_bounds(BoundClass::Ibo, 4, &SearchOptions::default()).unwrap())
    });
    let g = cw4_pp_term().eval().unwrap().graph;
    group.bench_function("cwd_at_most 3 on the 10-vertex probe cograph", |b| {
        b.iter_batched(
            || g.clone(),
            |g| cwd_at_most(&g, 3).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, deciders, graphs_and_forms, searches);
criterion_main!(benches);
