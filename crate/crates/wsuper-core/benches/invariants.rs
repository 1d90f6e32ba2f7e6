//! Parallel versus sequential execution of the heavy kernels: the invariant
//! solve behind the PBW check, the modular representation search and the
//! superalgebra tensor sweep.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wsuper_core::algebra_data::{build_gl, build_osp12n, element, osp12_regular_nilpotent};
use wsuper_core::nilpotent_frame::{FrameOptions, NilpotentFrame};
use wsuper_core::scalar::Scalar;
use wsuper_core::superstructure::tensor_identity_sweep;
use wsuper_core::walgebra::reps::{search_rep_modular, twodim_system};
use wsuper_core::walgebra::WAlgebra;
use wsuper_core::Exec;

fn modes() -> Vec<(&'static str, Exec)> {
    let mut m = vec![("sequential", Exec::Sequential)];
    if cfg!(feature = "parallel") {
        m.push(("parallel", Exec::Parallel));
    }
    m
}

fn invariants(c: &mut Criterion) {
    let g = build_gl(2, 1).unwrap();
    let e = element(&g, &[("E12", Scalar::one())]).unwrap();
    let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
    let mut group = c.benchmark_group("gl21_invariants_D8");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(WAlgebra::compute(&frame, 8, exec).unwrap().pbw_check().all()))
        });
    }
    group.finish();
}

fn rep_search(c: &mut Criterion) {
    let g = build_osp12n(1).unwrap();
    let e = osp12_regular_nilpotent(&g).unwrap();
    let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
    let table = WAlgebra::compute(&frame, 8, Exec::Sequential).unwrap().commutator_table().unwrap();
    let sys = twodim_system(&table);
    let mut group = c.benchmark_group("osp_twodim_search_p5");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(search_rep_modular(&sys, 5, 8, exec).unwrap().count))
        });
    }
    group.finish();
}

fn tensor_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("tensor_identity_sweep_2");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(tensor_identity_sweep(2, exec).unwrap().len()))
        });
    }
    group.finish();
}

criterion_group!(benches, invariants, rep_search, tensor_sweep);
criterion_main!(benches);
