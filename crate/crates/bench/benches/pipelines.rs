use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use loopcalc_core::models::builtin;
use loopcalc_core::stringtop::loop_algebra;
use loopcalc_core::sullivan::{hodge_table, FreeLoopModel};
use loopcalc_core::HochschildComplex;

fn bench_chain_complex(c: &mut Criterion) {
    let pd = builtin("S2xS3").unwrap().pd;
    c.bench_function("hochschild complex S2xS3 N=10", |b| {
        b.iter(|| {
            let alg = Arc::new(pd.algebra().clone());
            std::hint::black_box(HochschildComplex::build(alg, 10).unwrap())
        });
    });
}

fn bench_homology(c: &mut Criterion) {
    let pd = builtin("S2xS3").unwrap().pd;
    let hc = HochschildComplex::build(Arc::new(pd.algebra().clone()), 10).unwrap();
    c.bench_function("homology S2xS3 degree 10", |b| {
        b.iter(|| std::hint::black_box(hc.complex().homology(10).unwrap()));
    });
}

fn bench_loop_algebra(c: &mut Criterion) {
    let pd = builtin("CP2").unwrap().pd;
    c.bench_function("loop algebra CP2 N=10", |b| {
        b.iter(|| std::hint::black_box(loop_algebra(&pd, 10).unwrap()));
    });
}

fn bench_hodge(c: &mut Criterion) {
    let sullivan = builtin("S2xS2").unwrap().sullivan;
    let flm = FreeLoopModel::build(&sullivan).unwrap();
    c.bench_function("hodge table S2xS2 N=10", |b| {
        b.iter(|| std::hint::black_box(hodge_table(&flm, 10).unwrap()));
    });
}

criterion_group!(
    benches,
    bench_chain_complex,
    bench_homology,
    bench_loop_algebra,
    bench_hodge
);
criterion_main!(benches);
