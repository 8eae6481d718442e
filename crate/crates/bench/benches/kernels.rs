use criterion::{criterion_group, criterion_main, Criterion};
use hslab_bench::{equilibrated_chain, query_points};
use hslab_core::metrics::blocked_set_volumes;
use hslab_core::model::sample_hard_sphere_rejection;
use hslab_core::rng::rng_stream;
use hslab_core::ModelParams;
use std::hint::black_box;

fn chain_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain_step");
    for lambda in [0.1, 0.5] {
        let chain = equilibrated_chain(2, 20.0, lambda, 1);
        group.bench_function(format!("single_center/lambda={lambda}"), |b| {
            let mut ch = chain.clone();
            b.iter(|| black_box(ch.single_center_step()))
        });
        group.bench_function(format!("heat_bath/lambda={lambda}"), |b| {
            let mut ch = chain.clone();
            let l = 2.0 * ch.params.r();
            b.iter(|| ch.heat_bath_step(l).unwrap())
        });
    }
    group.finish();
}

fn rejection(c: &mut Criterion) {
    let params = ModelParams::cube(2, 2.5, 0.5).unwrap();
    let mut rng = rng_stream(2, 0);
    c.bench_function("rejection_sample/side=2.5", |b| {
        b.iter(|| sample_hard_sphere_rejection(&params, &mut rng, 1_000_000).unwrap())
    });
}

fn blocked_volume(c: &mut Criterion) {
    let chain = equilibrated_chain(2, 20.0, 0.5, 3);
    let points = query_points(&chain, 256, 3);
    let mut rng = rng_stream(3, 2);
    let mut cycle = points.iter().cycle();
    c.bench_function("blocked_volume/1024_samples", |b| {
        b.iter(|| blocked_set_volumes(&chain.config, &chain.params, cycle.next().unwrap(), 1024, &mut rng).unwrap())
    });
}

fn grid_query(c: &mut Criterion) {
    let chain = equilibrated_chain(2, 40.0, 0.5, 4);
    let points = query_points(&chain, 4096, 4);
    let radius = 2.0 * chain.params.r();
    c.bench_function("grid_any_within/4096_queries", |b| {
        b.iter(|| points.iter().filter(|p| chain.config.any_within(p, radius)).count())
    });
}

criterion_group!(benches, chain_steps, rejection, blocked_volume, grid_query);
criterion_main!(benches);
