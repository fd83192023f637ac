use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use spdp::linop::{Grad2D, LinearOperator};
use spdp::prox::{prox_conjugate_into, prox_into};
use spdp::ProxFunction;
use spdp_bench::{signal, tomo};

fn prox_kernels(c: &mut Criterion) {
    let n = 1 << 16;
    let v = signal(n, 1);
    let shift = signal(n, 2);
    let mut out = vec![0.0; n];
    let functions = [
        ProxFunction::l1(0.9, shift.clone()).unwrap(),
        ProxFunction::sq_l2(0.1, shift.clone()).unwrap(),
        ProxFunction::l2_norm(1.0, shift).unwrap(),
        ProxFunction::group_l12(0.8, n / 2).unwrap(),
        ProxFunction::indicator_box(0.0, 1.0).unwrap(),
    ];
    let mut group = c.benchmark_group("prox");
    group.throughput(Throughput::Elements(n as u64));
    for f in &functions {
        group.bench_function(BenchmarkId::new("primal", f.name()), |b| {
            b.iter(|| prox_into(f, 0.5, black_box(&v), &mut out).unwrap())
        });
        group.bench_function(BenchmarkId::new("conjugate", f.name()), |b| {
            b.iter(|| prox_conjugate_into(f, 0.5, black_box(&v), &mut out).unwrap())
        });
    }
    group.finish();
}

fn operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("operator");
    for n in [64, 256] {
        let t = tomo(n);
        let x = signal(n * n, 3);
        let y = signal(t.a.shape().rows, 4);
        let mut fwd = vec![0.0; t.a.shape().rows];
        let mut adj = vec![0.0; n * n];
        group.throughput(Throughput::Elements(t.a.nnz() as u64));
        group.bench_with_input(BenchmarkId::new("projector", n), &n, |b, _| {
            b.iter(|| t.a.apply_into(black_box(&x), &mut fwd))
        });
        group.bench_with_input(BenchmarkId::new("projector_adjoint", n), &n, |b, _| {
            b.iter(|| t.a.apply_adjoint_into(black_box(&y), &mut adj))
        });

        let d = Grad2D::new(n).unwrap();
        let g = signal(2 * n * n, 5);
        let mut dx = vec![0.0; 2 * n * n];
        group.throughput(Throughput::Elements((n * n) as u64));
        group.bench_with_input(BenchmarkId::new("gradient", n), &n, |b, _| {
            b.iter(|| d.apply_into(black_box(&x), &mut dx))
        });
        group.bench_with_input(BenchmarkId::new("gradient_adjoint", n), &n, |b, _| {
            b.iter(|| d.apply_adjoint_into(black_box(&g), &mut adj))
        });
    }
    group.finish();
}

criterion_group!(benches, prox_kernels, operators);
criterion_main!(benches);
