use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dephrasure::antideg::verify_antidegradable;
use dephrasure::dephrasure::{single_letter_ci, ChannelParams};
use dephrasure::multiletter::{brute_force_ci, multiletter_ci, repetition_ci_opt, CodeState};
use dephrasure::private::private_lower_bound;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params() -> ChannelParams {
    ChannelParams::new(0.11, 0.33).unwrap()
}

fn single_letter(c: &mut Criterion) {
    c.bench_function("single_letter_ci", |b| b.iter(|| single_letter_ci(black_box(params()))));
    c.bench_function("private_lower_bound", |b| {
        b.iter(|| private_lower_bound(black_box(params())))
    });
    c.bench_function("verify_antidegradable", |b| {
        let par = ChannelParams::new(0.1, 0.45).unwrap();
        b.iter(|| verify_antidegradable(black_box(par), 1e-10).unwrap())
    });
}

fn multiletter(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiletter_ci");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=4 {
        let code = CodeState::haar_random(n, 1 << n, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::new("blocks", n), &code, |b, code| {
            b.iter(|| multiletter_ci(code, params()).unwrap())
        });
        if n <= 3 {
            group.bench_with_input(BenchmarkId::new("dense", n), &code, |b, code| {
                b.iter(|| brute_force_ci(code, params()).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("repetition_ci_opt");
    for n in [1, 3, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| repetition_ci_opt(params(), n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, single_letter, multiletter);
criterion_main!(benches);
