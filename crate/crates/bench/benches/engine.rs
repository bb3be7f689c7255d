use criterion::{criterion_group, criterion_main, Criterion};
use rug::Complex;

use lrel::group::{generate_closure, CosetTable};
use lrel::numerics::{complex_gamma, eval_L_series};
use lrel::verify::{sample_points, SampleSpec};
use lrel::PrecisionConfig;

fn gamma_eval(c: &mut Criterion) {
    let cfg = PrecisionConfig::default();
    let z = Complex::with_val(cfg.bits(), (0.5, 2.0));
    c.bench_function("complex_gamma_60_digits", |b| {
        b.iter(|| complex_gamma(std::hint::black_box(&z), &cfg).unwrap())
    });
}

fn governing_group_closure(c: &mut Criterion) {
    let generators = CosetTable::shared().builtins.m_l_generators();
    let mut group = c.benchmark_group("group");
    group.sample_size(10);
    group.bench_function("governing_group_closure_23040", |b| {
        b.iter(|| generate_closure(std::hint::black_box(&generators), 46080).unwrap())
    });
    group.finish();
}

fn l_series_eval(c: &mut Criterion) {
    let cfg = PrecisionConfig::default();
    let x = sample_points(&SampleSpec::new(1, 1), cfg.bits())
        .unwrap()
        .remove(0);
    let mut group = c.benchmark_group("lfun");
    group.sample_size(20);
    group.bench_function("eval_L_series_60_digits", |b| {
        b.iter(|| eval_L_series(std::hint::black_box(&x), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, gamma_eval, governing_group_closure, l_series_eval);
criterion_main!(benches);
