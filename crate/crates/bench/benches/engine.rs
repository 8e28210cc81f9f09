use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ujac_core::assembly::chi_compactified;
use ujac_core::graphs::{enumerate_stable_graphs, stable_pairs};
use ujac_core::interior::{genus0_class, InteriorProvider};
use ujac_core::picard::smith_normal_form;
use ujac_core::{Multigraph, PicardGroup};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.bench_function("stable_graphs_2_2", |b| b.iter(|| enumerate_stable_graphs(2, black_box(&[1, 1])).unwrap()));
    group.bench_function("stable_pairs_1_111", |b| b.iter(|| stable_pairs(1, black_box(&[1, 1, 1])).unwrap()));
    group.finish();
}

fn smith(c: &mut Criterion) {
    let complete = |n: usize| Multigraph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect());
    let k6 = complete(6);
    let pic = PicardGroup::new(&k6).unwrap();
    let laplacian = pic.laplacian().clone();
    c.bench_function("snf_k6_laplacian", |b| b.iter(|| smith_normal_form(black_box(&laplacian))));
    c.bench_function("picard_k6", |b| b.iter(|| PicardGroup::new(black_box(&k6)).unwrap()));
}

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    group.sample_size(10);
    group.bench_function("chi_1_111", |b| {
        b.iter(|| {
            let provider = InteriorProvider::new();
            chi_compactified(1, black_box(&[1, 1, 1]), 0, &provider).unwrap()
        })
    });
    group.bench_function("genus0_class_8", |b| b.iter(|| genus0_class(black_box(8)).unwrap()));
    group.finish();
}

criterion_group!(benches, enumeration, smith, assembly);
criterion_main!(benches);
