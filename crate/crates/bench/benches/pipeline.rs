use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use perigraph_core::*;

fn decorated_triangle() -> FundamentalGraph {
    make_decorated(2, &finite_graph(3, &[(0, 1), (1, 2), (2, 0)]).unwrap(), 0).unwrap()
}

fn tree_search(c: &mut Criterion) {
    let kagome = make_kagome();
    let tau = OneForm::index_form(&kagome);
    c.bench_function("minimal_form/kagome", |b| {
        b.iter(|| minimal_form(black_box(&kagome), black_box(&tau)).unwrap())
    });
    let wheel = finite_graph(
        7,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (0, 6),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 1),
        ],
    )
    .unwrap()
    .with_indices(
        1,
        (0..12)
            .map(|k| IndexVector::from([i64::from(k % 3 == 0)]))
            .collect(),
    )
    .unwrap();
    let x = OneForm::index_form(&wheel);
    c.bench_function("minimal_form/wheel7", |b| {
        b.iter(|| minimal_form(black_box(&wheel), black_box(&x)).unwrap())
    });
}

fn sweeps(c: &mut Criterion) {
    let kagome = make_kagome();
    let tau = OneForm::index_form(&kagome);
    c.bench_function("band_sweep/kagome/64", |b| {
        b.iter(|| band_sweep(black_box(&kagome), &tau, SweepOptions::default()).unwrap())
    });
    let dec = decorated_triangle();
    let tau = OneForm::index_form(&dec);
    let opts = SweepOptions {
        grid_n: 128,
        ..SweepOptions::default()
    };
    c.bench_function("band_sweep/decorated/128", |b| {
        b.iter(|| band_sweep(black_box(&dec), &tau, opts).unwrap())
    });
}

fn mass(c: &mut Criterion) {
    let hex = make_hexagonal();
    let tau = OneForm::index_form(&hex);
    c.bench_function("effective_mass/hexagonal", |b| {
        b.iter(|| effective_mass(black_box(&hex), &tau).unwrap())
    });
}

criterion_group!(benches, tree_search, sweeps, mass);
criterion_main!(benches);
