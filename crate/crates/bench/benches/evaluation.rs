use criterion::{criterion_group, criterion_main, Criterion};
use rinkpass::config::Config;
use rinkpass::metrics::{evaluate_lane, evaluate_play};
use rinkpass_bench::{bench_play, bench_snapshot};

fn single_lane(c: &mut Criterion) {
    let cfg = Config::default();
    let snap = bench_snapshot();
    c.bench_function("lane_65ftps", |b| {
        b.iter(|| evaluate_lane(&snap, 0.4, 65.0, &cfg).unwrap())
    });
}

fn full_play(c: &mut Criterion) {
    let cfg = Config::default();
    let play = bench_play();
    let mut group = c.benchmark_group("play");
    group.sample_size(10);
    group.bench_function("evaluate_play_126x4", |b| {
        b.iter(|| evaluate_play(&play, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, single_lane, full_play);
criterion_main!(benches);
