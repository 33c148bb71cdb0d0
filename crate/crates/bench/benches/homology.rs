use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hochbar_bench::{double_s3, q_s3, random_sparse, semion};
use hochbar_core::algebra::{hochschild_complex, Bimodule, FinGroup};
use hochbar_core::gpd::sl2z_orbits;
use hochbar_core::matrix;
use hochbar_core::verlinde::{loop_operator, shuffle_product, LoopChain};
use hochbar_core::ScalarField;

fn bench_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    let mq = random_sparse(ScalarField::Q, 300, 800, 4, 42);
    group.bench_function("sparse_rank_q_300x800", |b| {
        b.iter(|| matrix::rank(black_box(&mq)))
    });
    let mp = random_sparse(ScalarField::Fp(7), 300, 800, 4, 42);
    group.bench_function("sparse_rank_f7_300x800", |b| {
        b.iter(|| matrix::rank(black_box(&mp)))
    });
    group.finish();
}

fn bench_hochschild(c: &mut Criterion) {
    let mut group = c.benchmark_group("hochschild");
    group.sample_size(10);
    let a = q_s3();
    let m = Bimodule::regular(&a);
    group.bench_function("q_s3_window_4_dims", |b| {
        b.iter(|| {
            let h = hochschild_complex(&a, &m, 4, 100_000).unwrap();
            h.complex().homology_dims().unwrap()
        })
    });
    let d = double_s3();
    let md = Bimodule::regular(&d);
    group.bench_function("double_s3_window_2_h0", |b| {
        b.iter(|| {
            let h = hochschild_complex(&d, &md, 2, 50_000).unwrap();
            h.complex().homology_dim(0).unwrap()
        })
    });
    group.finish();
}

fn bench_orbits(c: &mut Criterion) {
    c.bench_function("sl2z_orbits_s3", |b| {
        let g = FinGroup::symmetric3();
        b.iter(|| sl2z_orbits(black_box(&g)).len())
    });
}

fn bench_shuffle(c: &mut Criterion) {
    let cat = semion();
    let objects = vec![vec![0], vec![1], vec![0, 1]];
    let ls = loop_operator(&cat, &objects, 3, 100_000).unwrap();
    let x = LoopChain::single(ls.bases[1][0].clone(), ScalarField::Q.one());
    let y = LoopChain::single(ls.bases[1][1].clone(), ScalarField::Q.one());
    c.bench_function("shuffle_product_1_1", |b| {
        b.iter(|| shuffle_product(&cat, black_box(&x), 1, black_box(&y), 1))
    });
}

criterion_group!(benches, bench_rank, bench_hochschild, bench_orbits, bench_shuffle);
criterion_main!(benches);
