use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use caplab_core::oracle::{literal_capacity, oracle_capacity};
use caplab_core::random::{random_instance, random_matrix, Profile};
use caplab_core::{capacity, snf, sur_global, Budget, FiniteModule, Kind, RingDescriptor};

fn bench_snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("snf");
    for dim in [4usize, 8, 16] {
        let mats: Vec<_> = (0..32).map(|s| random_matrix(s, dim, 50)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &mats, |b, mats| {
            b.iter(|| mats.iter().map(|a| snf(black_box(a)).d.rows()).sum::<usize>())
        });
    }
    group.finish();
}

fn bench_classgroup(c: &mut Criterion) {
    let mut group = c.benchmark_group("classgroup");
    for d in [-23i64, -47, -10_007, -1_000_003] {
        let ring = RingDescriptor::quadratic(d).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &ring, |b, ring| b.iter(|| ring.class_group().unwrap().order));
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let budget = Budget::default();
    let a = FiniteModule::new(&[8, 4, 2]).unwrap();
    let b2 = FiniteModule::new(&[4, 2]).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    for kind in Kind::ALL {
        group.bench_function(format!("search/{kind}"), |b| b.iter(|| oracle_capacity(kind, &a, &b2, &budget).unwrap()));
    }
    let small = FiniteModule::new(&[4, 2]).unwrap();
    let two = FiniteModule::new(&[2]).unwrap();
    group.bench_function("literal/sur", |b| b.iter(|| literal_capacity(Kind::Sur, &small, &two, &budget).unwrap()));
    group.finish();
}

fn bench_global(c: &mut Criterion) {
    let budget = Budget::default();
    let z: Vec<_> = (0..64).map(|s| random_instance(s, &Profile::integers()).unwrap()).collect();
    let zmod: Vec<_> = (0..64).map(|s| random_instance(s, &Profile::zmod(360)).unwrap()).collect();
    c.bench_function("sur_global/z", |b| b.iter(|| z.iter().map(|(m, n)| sur_global(m, n, &budget).unwrap().value).max()));
    c.bench_function("capacity/zmod", |b| {
        b.iter(|| zmod.iter().map(|(m, n)| capacity(Kind::Inj, m, n, &budget).unwrap().value).max())
    });
}

criterion_group!(benches, bench_snf, bench_classgroup, bench_oracle, bench_global);
criterion_main!(benches);
