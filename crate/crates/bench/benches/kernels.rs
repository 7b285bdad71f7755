//! Hot paths: dense linear algebra, the enumeration search, Born-rule
//! evaluation, one see-saw restart, and the closed-form value sweep.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use prepctx_bench::{cglmp_flat_strategy, dense_hermitian, rac22_game, rac23_game};
use prepctx_core::*;

fn linalg_kernels(c: &mut Criterion) {
    let a = dense_hermitian(8);
    let b = dense_hermitian(8);
    c.bench_function("tensor 8x8 with 8x8", |bench| {
        bench.iter(|| tensor(black_box(&a), black_box(&b)))
    });

    let joint = tensor(&a, &b);
    c.bench_function("partial trace 64 to 8", |bench| {
        bench.iter(|| partial_trace_first(black_box(&joint), 8, 8).unwrap())
    });

    let h = dense_hermitian(16);
    c.bench_function("psd projection 16x16", |bench| {
        bench.iter(|| psd_project(black_box(&h)))
    });
}

fn bound_kernels(c: &mut Criterion) {
    let game = rac23_game();
    c.bench_function("exact bound rac(2,3)", |bench| {
        bench.iter(|| pnc_bound(black_box(&game), 3, SearchMode::Exact).unwrap())
    });
    c.bench_function("pruned bound rac(2,3)", |bench| {
        bench.iter(|| pnc_bound(black_box(&game), 3, SearchMode::BranchAndBound).unwrap())
    });
}

fn born_kernel(c: &mut Criterion) {
    let (game, strategy) = cglmp_flat_strategy(10);
    c.bench_function("born distribution cglmp d=10", |bench| {
        bench.iter(|| {
            let dist = born_distribution(black_box(&strategy)).unwrap();
            game.performance(&dist).unwrap()
        })
    });
}

fn seesaw_kernel(c: &mut Criterion) {
    let game = rac22_game();
    let mut group = c.benchmark_group("seesaw");
    group.sample_size(10);
    group.bench_function("one restart rac(2,2) dim 2", |bench| {
        bench.iter(|| {
            let mut cfg = SeesawConfig::new(2);
            cfg.restarts = 1;
            cfg.max_iters = 40;
            cfg.rng_seed = 7;
            seesaw(black_box(&game), &cfg).unwrap().value
        })
    });
    group.finish();
}

fn formula_kernel(c: &mut Criterion) {
    c.bench_function("flat-weight value sweep d=2..200", |bench| {
        bench.iter(|| {
            let mut acc = 0.0;
            for d in 2..=200usize {
                acc += cglmp_mixed_value(&CglmpSpec::new(black_box(d)).unwrap());
            }
            acc
        })
    });
}

criterion_group!(
    kernels,
    linalg_kernels,
    bound_kernels,
    born_kernel,
    seesaw_kernel,
    formula_kernel
);
criterion_main!(kernels);
