use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use logrank_core::adcomb::BsgParams;
use logrank_core::approxdual::{exact_dual_oracle, find_dual_pair};
use logrank_core::boolmatrix::{max_mono_exact, rank_f2, rank_real};
use logrank_core::f2core::{duality_measure, wht};
use logrank_core::generators::{random_real_rank, random_set, weight_slice};
use logrank_core::protocol::build_protocol;
use logrank_core::{Limits, MonoFinder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("wht");
    for n in [10usize, 14, 18] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let table: Vec<i64> = (0..1usize << n).map(|_| rng.gen_range(-3..=3)).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &table, |b, t| {
            b.iter(|| {
                let mut t = t.clone();
                wht(&mut t).unwrap();
                t
            })
        });
    }
    g.finish();

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_set(12, 200, &mut rng).unwrap();
    let bset = random_set(12, 200, &mut rng).unwrap();
    c.bench_function("duality_measure/n12x200", |b| {
        b.iter(|| duality_measure(black_box(&a), black_box(&bset)))
    });
}

fn ranks(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for size in [16usize, 32, 64] {
        let mut rng = ChaCha8Rng::seed_from_u64(size as u64);
        let m = random_real_rank(size, size, 6, &mut rng).unwrap();
        g.bench_with_input(BenchmarkId::new("real", size), &m, |b, m| {
            b.iter(|| rank_real(m))
        });
        g.bench_with_input(BenchmarkId::new("f2", size), &m, |b, m| {
            b.iter(|| rank_f2(m))
        });
    }
    g.finish();
}

fn rectangles(c: &mut Criterion) {
    let mut g = c.benchmark_group("max_mono_exact");
    for size in [8usize, 12, 16] {
        let mut rng = ChaCha8Rng::seed_from_u64(size as u64);
        let m = random_real_rank(size, size, 4, &mut rng).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| {
            b.iter(|| max_mono_exact(m, 20).unwrap())
        });
    }
    g.finish();

    let slice = weight_slice(10, 2).unwrap();
    c.bench_function("exact_dual_oracle/weight2_n10", |b| {
        b.iter(|| exact_dual_oracle(&slice, &slice, 64).unwrap())
    });
}

fn pipelines(c: &mut Criterion) {
    let limits = Limits::default();
    let mut g = c.benchmark_group("find_dual_pair");
    for n in [8usize, 10, 12] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = random_set(n, 40, &mut rng).unwrap();
        let bset = random_set(n, 40, &mut rng).unwrap();
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| find_dual_pair(&a, &bset, None, &limits, &BsgParams::default()))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("build_protocol");
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let m = random_real_rank(16, 16, 5, &mut rng).unwrap();
    for finder in [MonoFinder::Exact, MonoFinder::Greedy] {
        g.bench_function(finder.name(), |b| {
            b.iter(|| build_protocol(&m, &finder, &limits, None).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, transforms, ranks, rectangles, pipelines);
criterion_main!(benches);
