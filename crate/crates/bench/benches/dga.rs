use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dga_core::fixtures;
use dga_core::game::{build_game, position_cap, solve};
use dga_core::graph::{canonical_form, enumerate_graphs};
use dga_core::language::ndga_emptiness;
use dga_core::mso::compile;
use dga_core::transforms::{intersection, to_anf, union};
use dga_core::{Acceptor, Alphabet, LabeledGraph};

fn cycle(n: usize) -> LabeledGraph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)]).collect();
    LabeledGraph::blank(n, &edges).expect("valid cycle")
}

fn acceptance(c: &mut Criterion) {
    let a = fixtures::a_3color();
    let g = cycle(5);
    c.bench_function("lazy acceptance A_3color on C5", |b| b.iter(|| Acceptor::new(&a).accepts(black_box(&g)).unwrap()));
    c.bench_function("full game A_3color on C5", |b| b.iter(|| solve(&build_game(&a, black_box(&g), position_cap()).unwrap()).winner));
    let centric = fixtures::a_centric();
    let g = fixtures::centric_in();
    c.bench_function("lazy acceptance A_centric on centric_in", |b| b.iter(|| Acceptor::new(&centric).accepts(black_box(&g)).unwrap()));
}

fn graphs(c: &mut Criterion) {
    let blank = Alphabet::blank();
    c.bench_function("enumerate blank graphs up to 4 nodes", |b| b.iter(|| enumerate_graphs(black_box(4), &blank, &blank).count()));
    let g = cycle(6);
    c.bench_function("canonical form of C6", |b| b.iter(|| canonical_form(black_box(&g))));
}

fn constructions(c: &mut Criterion) {
    let (a1, a2) = (fixtures::a_3color(), fixtures::a_conn());
    c.bench_function("union A_3color A_conn", |b| b.iter(|| union(black_box(&a1), &a2).unwrap()));
    c.bench_function("intersection A_3color A_conn", |b| b.iter(|| intersection(black_box(&a1), &a2).unwrap()));
    let minor = fixtures::a_minor_k3();
    c.bench_function("anf A_minor_K3", |b| b.iter(|| to_anf(black_box(&minor)).unwrap()));
    let phi = fixtures::phi_3color();
    let blank = Alphabet::blank();
    c.bench_function("compile phi_3color", |b| b.iter(|| compile(black_box(&phi), &blank, &blank).unwrap()));
}

fn emptiness(c: &mut Criterion) {
    let a = fixtures::a_min3();
    c.bench_function("emptiness A_min3 cap 4", |b| b.iter(|| ndga_emptiness(black_box(&a), 4, false).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = acceptance, graphs, constructions, emptiness
}
criterion_main!(benches);
