//! One worker thread against the default rayon pool on the data-parallel
//! hot spots. Build with `--no-default-features` to time the sequential
//! fallback instead; both variants then run the same code path.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use leafatlas::cherednik::{Cherednik, Mode};
use leafatlas::exactnum::CycNum;
use leafatlas::groups;
use leafatlas::leaves::LeafAtlas;
use leafatlas::par;
use leafatlas::refgroup::ParameterK;
use leafatlas::tau::{make_full, TauContext};
use leafatlas::verify::random_element;

const POOLS: [(&str, usize); 2] = [("one-thread", 1), ("default-pool", 0)];

fn parabolic_classes_b4(c: &mut Criterion) {
    let mut g = c.benchmark_group("parabolic-classes-B4");
    g.sample_size(10);
    for (label, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| {
                par::with_threads(threads, || {
                    let w = groups::b(4);
                    black_box(w.parabolic_classes().len())
                })
            })
        });
    }
    g.finish();
}

fn delta_scan(c: &mut Criterion) {
    let w = groups::b(4);
    let tau = leafatlas::linalg::Matrix::scalar(4, &CycNum::from_int(-1));
    let mut g = c.benchmark_group("delta-scan-B4");
    for (label, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| par::with_threads(threads, || black_box(make_full(&w, &tau).unwrap())))
        });
    }
    g.finish();
}

fn leaves_d4_t(c: &mut Criterion) {
    let w = Arc::new(groups::d(4));
    let tau = groups::first_diag(4, &CycNum::from_int(-1));
    let mut g = c.benchmark_group("leaves-zero-D4-t");
    g.sample_size(10);
    for (label, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| {
                par::with_threads(threads, || {
                    let ctx = TauContext::build(w.clone(), tau.clone(), 100_000).unwrap();
                    let atlas = LeafAtlas::new(&ctx).unwrap();
                    black_box(atlas.leaves_zero_tau().len())
                })
            })
        });
    }
    g.finish();
}

fn cherednik_batch(c: &mut Criterion) {
    let w = Arc::new(groups::b(2));
    let k = ParameterK::new(
        &w,
        vec![vec![CycNum::zero(), CycNum::one()], vec![CycNum::zero(), CycNum::from_int(2)]],
    )
    .unwrap();
    let eng = Cherednik::new(w, k, Mode::TDeform).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs: Vec<_> =
        (0..64).map(|_| (random_element(&eng, &mut rng, 2, 2), random_element(&eng, &mut rng, 2, 2))).collect();
    let mut g = c.benchmark_group("cherednik-batch-B2");
    for (label, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| par::with_threads(threads, || black_box(eng.multiply_batch(&pairs).len())))
        });
    }
    g.finish();
}

criterion_group!(benches, parabolic_classes_b4, delta_scan, leaves_d4_t, cherednik_batch);
criterion_main!(benches);
