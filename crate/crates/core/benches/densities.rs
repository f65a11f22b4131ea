//! Parallel vs sequential timings of the heavy kernels.
//!
//! In the default build each workload runs twice: on a one-thread pool
//! (`sequential`) and on the full rayon pool (`parallel`). Building with
//! `--no-default-features` compiles the plain iterator fallback instead, and
//! both variants then measure it.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graphonlab::commonality::{search_counterexample, SearchConfig};
use graphonlab::cutnorm::cut_norm_exact;
use graphonlab::expansion::subset_expansion;
use graphonlab::lemmas::{random_graphon_with_blocks, random_kernel};
use graphonlab::{hom_density_with, par, DensityOptions, Graph, Method};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn variants() -> [(&'static str, Option<usize>); 2] {
    [("sequential", Some(1)), ("parallel", None)]
}

fn densities(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let w = random_graphon_with_blocks(&mut rng, 12);
    let k5 = Graph::complete(5);
    let opts = DensityOptions::with_method(Method::Enumerate);
    let mut group = c.benchmark_group("enumerate_k5_12_blocks");
    for (name, threads) in variants() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || hom_density_with(black_box(&k5), &w, &opts).unwrap()))
        });
    }
    group.finish();
}

fn expansion(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let w = random_graphon_with_blocks(&mut rng, 3);
    let h = Graph::complete_bipartite(3, 4);
    let mut group = c.benchmark_group("expansion_k34");
    group.sample_size(10);
    for (name, threads) in variants() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || subset_expansion(black_box(&h), &w).unwrap()))
        });
    }
    group.finish();
}

fn cut_norm(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = loop {
        let u = random_kernel(&mut rng, 14);
        if u.blocks() >= 12 {
            break u;
        }
    };
    let mut group = c.benchmark_group("cut_norm");
    for (name, threads) in variants() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || cut_norm_exact(black_box(&u)).unwrap()))
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let paw = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
    let cfg = SearchConfig {
        blocks: 3,
        restarts: 8,
        iters: 100,
        seed: 5,
        ..Default::default()
    };
    let mut group = c.benchmark_group("search_paw");
    group.sample_size(10);
    for (name, threads) in variants() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || search_counterexample(black_box(&paw), &cfg).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, densities, expansion, cut_norm, search);
criterion_main!(benches);
