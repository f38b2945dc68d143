use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vlab_bench::{bench_algebras, dense_element};
use vlab_core::{Envelope, PrimeField};

fn straightening(c: &mut Criterion) {
    let f = PrimeField::new(7).unwrap();
    let mut group = c.benchmark_group("pbw_mul");
    for (name, alg) in bench_algebras() {
        let u = dense_element(&f, alg.dim(), 2);
        let v = dense_element(&f, alg.dim(), 3);
        group.bench_with_input(BenchmarkId::new("cold", name), &alg, |b, alg| {
            b.iter(|| {
                let env = Envelope::from_algebra(alg, &f).unwrap();
                env.mul(&v, &u)
            })
        });
        let env = Envelope::from_algebra(&alg, &f).unwrap();
        env.mul(&v, &u);
        group.bench_function(BenchmarkId::new("memoized", name), |b| b.iter(|| env.mul(&v, &u)));
    }
    group.finish();
}

fn powers(c: &mut Criterion) {
    let mut group = c.benchmark_group("generator_power");
    for p in [5u64, 11] {
        let f = PrimeField::new(p).unwrap();
        let alg = vlab_core::LieAlgebra::sl(2).unwrap();
        let env = Envelope::from_algebra(&alg, &f).unwrap();
        let e = env.generator(0);
        let fgen = env.generator(2);
        let x = e.add(&f, &fgen);
        group.bench_with_input(BenchmarkId::new("sl2_(e+f)^p", p), &p, |b, &p| b.iter(|| env.pow(&x, p)));
    }
    group.finish();
}

criterion_group!(benches, straightening, powers);
criterion_main!(benches);
