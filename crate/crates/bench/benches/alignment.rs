use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use manifold_align::{
    calibrate_graph, cka, knn_graph, manifold_kernel, manifold_kernel_from_graph, mka_fast,
    mka_naive, pairwise_distances, rbf_kernel, RbfForm, SigmaPolicy,
};
use manifold_align_bench::gaussian_pair;

const N: usize = 1000;
const D: usize = 50;
const K: usize = 100;

fn bench_pipeline(c: &mut Criterion) {
    let (x, _) = gaussian_pair(N, D, 7);
    let dist = pairwise_distances(&x);

    c.bench_function("pairwise_distances_n1000_d50", |b| {
        b.iter(|| pairwise_distances(black_box(&x)))
    });

    c.bench_function("knn_graph_n1000_k100", |b| {
        b.iter(|| knn_graph(black_box(&dist), K).unwrap())
    });

    c.bench_function("calibrate_graph_n1000_k100", |b| {
        let graph = knn_graph(&dist, K).unwrap();
        b.iter(|| {
            let mut g = graph.clone();
            calibrate_graph(&mut g);
            g
        })
    });

    c.bench_function("manifold_kernel_from_graph_n1000_k100", |b| {
        let mut graph = knn_graph(&dist, K).unwrap();
        calibrate_graph(&mut graph);
        b.iter(|| manifold_kernel_from_graph(black_box(&graph)))
    });
}

fn bench_metrics(c: &mut Criterion) {
    let (x, y) = gaussian_pair(N, D, 7);
    let ku = manifold_kernel(&x, K).unwrap();
    let lu = manifold_kernel(&y, K).unwrap();

    c.bench_function("mka_fast_n1000_k100", |b| {
        b.iter(|| mka_fast(black_box(&ku), black_box(&lu)).unwrap())
    });

    let mut group = c.benchmark_group("dense");
    group.sample_size(20);
    group.bench_function("mka_naive_n1000_k100", |b| {
        b.iter(|| mka_naive(black_box(&ku), black_box(&lu)).unwrap())
    });
    let kx = rbf_kernel(&x, SigmaPolicy::Median, RbfForm::Unsquared).unwrap();
    let ly = rbf_kernel(&y, SigmaPolicy::Median, RbfForm::Unsquared).unwrap();
    group.bench_function("cka_rbf_n1000", |b| {
        b.iter(|| cka(black_box(&kx), black_box(&ly)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_pipeline, bench_metrics);
criterion_main!(benches);
