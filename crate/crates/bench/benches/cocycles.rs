use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hilab::*;
use hilab_bench::*;

fn area_cocycles(c: &mut Criterion) {
    let mut g = c.benchmark_group("hyperbolic_area");
    let mut r = rng(1);
    let h = SymmetricSpaceModel::HyperbolicPlane;
    let tri: Vec<GroupElement> = (0..3).map(|_| h.sample_ball(5.0, &mut r)).collect();
    for order in [8, 32, 128] {
        let j = hyperbolic_area(order);
        g.bench_with_input(BenchmarkId::from_parameter(order), &tri, |b, t| b.iter(|| j.call(black_box(t))));
    }
    g.finish();

    let j = euclidean_area();
    let dj = delta(&j);
    let quad: Vec<GroupElement> = (0..4).map(|i| GroupElement::translation(&[i as f64, (i * i) as f64 * 0.5])).collect();
    c.bench_function("euclidean_delta_area", |b| b.iter(|| dj.call(black_box(&quad))));
}

fn lattice_cochains(c: &mut Criterion) {
    let l = LatticeGroup::new(2, 0.25, 16).unwrap();
    let a = [gaussian(l, 0.8), gaussian(l, 1.0), gaussian(l, 0.9)];
    c.bench_function("convolve_33x33", |b| b.iter(|| convolve(black_box(&a[0]), black_box(&a[1])).unwrap()));

    let sym = cyclic_symmetrize(&euclidean_area());
    let mut r = rng(2);
    let sparse: Vec<ConvElement> = (0..3).map(|_| near(l, 6, &mut r)).collect();
    c.bench_function("tau_g_area_sparse", |b| b.iter(|| tau_g(&sym, black_box(&sparse)).unwrap()));

    let small = LatticeGroup::new(2, 0.4, 8).unwrap();
    let trio = [gaussian(small, 0.8), gaussian(small, 1.0), gaussian(small, 0.9)];
    let mut g = c.benchmark_group("fourier");
    g.sample_size(10);
    g.bench_function("fourier_check_17x17", |b| b.iter(|| fourier_check(&sym, black_box(&trio)).unwrap()));
    g.finish();
}

criterion_group!(benches, area_cocycles, lattice_cochains);
criterion_main!(benches);
