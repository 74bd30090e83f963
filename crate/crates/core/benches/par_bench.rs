//! Parallel versus sequential dense multiplication. With default features
//! `mul` fans rows out across the rayon pool while `mul_seq` stays on one
//! thread; building with `--no-default-features` makes the two lanes match.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poset_algebra::indexing::{Base, ChainAtlas};
use poset_algebra::oracle::{to_dense, DenseMatrix};
use poset_algebra::poset::PolarizedPoset;
use poset_algebra::verify::{verify_poset, VerifyConfig};

fn random_matrix(size: usize, prime: u64, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(size, prime);
    for r in 0..size {
        for c in 0..size {
            m.set(r, c, rng.gen_range(0..prime));
        }
    }
    m
}

fn dense_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_mul");
    for size in [64usize, 128, 256, 512] {
        let mut rng = ChaCha8Rng::seed_from_u64(size as u64);
        let a = random_matrix(size, 5, &mut rng);
        let b = random_matrix(size, 5, &mut rng);
        group.bench_with_input(BenchmarkId::new("parallel", size), &size, |bench, _| {
            bench.iter(|| a.mul(&b));
        });
        group.bench_with_input(BenchmarkId::new("sequential", size), &size, |bench, _| {
            bench.iter(|| a.mul_seq(&b));
        });
    }
    group.finish();
}

fn chain(n: usize) -> PolarizedPoset {
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let relations: Vec<(&str, &str)> = (1..n).map(|i| (refs[i - 1], refs[i])).collect();
    PolarizedPoset::from_relations(&refs, &relations, &[]).unwrap()
}

/// Render a generator's dense image: exercises the block evaluation path
/// that `to_dense` drives, independent of the multiply above.
fn dense_render(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_render");
    let poset = chain(3);
    let atlas = ChainAtlas::new(poset.clone(), Base::Finite(3)).unwrap();
    let space = atlas.space().clone();
    let ctx = poset_algebra::ring::RingContext::new(poset, Base::Finite(3), 5).unwrap();
    let sum = ctx.one().flatten();
    group.bench_function("identity_chain3", |bench| {
        bench.iter(|| to_dense(&space, &sum, 5, 4096).unwrap());
    });
    group.finish();
}

/// The whole check suite on one mid-sized poset; items themselves are
/// dispatched through the same parallel-or-sequential switch.
fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_suite");
    group.sample_size(10);
    let poset = chain(3);
    let cfg = VerifyConfig {
        samples: 40,
        ..VerifyConfig::default()
    };
    group.bench_function("chain3", |bench| {
        bench.iter(|| verify_poset(&poset, "chain3", &cfg).unwrap());
    });
    group.finish();
}

criterion_group!(benches, dense_mul, dense_render, suite);
criterion_main!(benches);
