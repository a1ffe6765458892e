//! Benchmarks for the hot paths: chain construction, the exact base-size
//! search, minimal degree, the normal lattice, and the taxonomy classifier.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use plinth_core::actions::classify;
use plinth_core::atlas::{construct, parse_group_expr};
use plinth_core::group::{PermGroup, StabilizerChain, DEFAULT_CENSUS_CAP};
use plinth_core::metrics::{base_size_exact, minimal_degree};
use plinth_core::structure::normal_lattice;

fn gl24() -> PermGroup {
    construct(&parse_group_expr("GL(2,4)").unwrap()).unwrap()
}

fn bench_chain_build(c: &mut Criterion) {
    let g = gl24();
    let gens = g.generators().to_vec();
    c.bench_function("stabilizer_chain_gl24", |b| {
        b.iter(|| {
            let chain = StabilizerChain::build(15, black_box(&gens), &[]).unwrap();
            black_box(chain.order().clone())
        })
    });
    let s8 = PermGroup::symmetric(8);
    let gens = s8.generators().to_vec();
    c.bench_function("stabilizer_chain_s8", |b| {
        b.iter(|| {
            let chain = StabilizerChain::build(8, black_box(&gens), &[]).unwrap();
            black_box(chain.order().clone())
        })
    });
}

fn bench_base_size(c: &mut Criterion) {
    let g = gl24();
    g.chain();
    c.bench_function("base_size_exact_gl24", |b| {
        b.iter(|| black_box(base_size_exact(&g, None).unwrap().0))
    });
    let triple = plinth_core::atlas::atlas_load("3A6d18").unwrap();
    c.bench_function("base_size_exact_3a6", |b| {
        b.iter(|| black_box(base_size_exact(&triple, None).unwrap().0))
    });
}

fn bench_minimal_degree(c: &mut Criterion) {
    let g = gl24();
    g.chain();
    c.bench_function("minimal_degree_gl24", |b| {
        b.iter(|| black_box(minimal_degree(&g, DEFAULT_CENSUS_CAP).unwrap().0))
    });
}

fn bench_lattice_and_classify(c: &mut Criterion) {
    let g = gl24();
    g.chain();
    c.bench_function("normal_lattice_gl24", |b| {
        b.iter(|| black_box(normal_lattice(&g, DEFAULT_CENSUS_CAP).unwrap().len()))
    });
    let lattice = normal_lattice(&g, DEFAULT_CENSUS_CAP).unwrap();
    c.bench_function("classify_gl24", |b| {
        b.iter(|| black_box(classify(&g, &lattice).unwrap().kind))
    });
}

fn bench_parser(c: &mut Criterion) {
    let text = "cosets(direct(C(3),A(5)),(1 2 3)(4 5 6),(4 5)(6 7))";
    c.bench_function("parse_group_expr", |b| {
        b.iter(|| black_box(parse_group_expr(black_box(text)).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_chain_build,
    bench_base_size,
    bench_minimal_degree,
    bench_lattice_and_classify,
    bench_parser
);
criterion_main!(benches);
