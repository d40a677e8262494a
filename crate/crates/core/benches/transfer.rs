use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hpt_core::builtins;
use hpt_core::exec::{self, Strategy};
use hpt_core::perturbation::linfty_transfer;
use hpt_core::random::{random_linfty, rng};

fn strategies() -> Vec<Strategy> {
    if exec::parallel_available() {
        vec![Strategy::Sequential, Strategy::Parallel]
    } else {
        vec![Strategy::Sequential]
    }
}

fn dgla(c: &mut Criterion) {
    let mut group = c.benchmark_group("dgla-acyclic");
    group.sample_size(10);
    for w in [4, 5] {
        let ex = builtins::dgla_acyclic(w).unwrap();
        for s in strategies() {
            group.bench_with_input(BenchmarkId::new(format!("{s:?}"), w), &w, |b, _| {
                exec::set_strategy(s);
                b.iter(|| linfty_transfer(&ex.contraction, &ex.codifferential, 100).unwrap());
            });
        }
    }
    group.finish();
}

fn random(c: &mut Criterion) {
    let mut group = c.benchmark_group("random-linfty");
    group.sample_size(10);
    let ex = random_linfty(&mut rng(7), 4).unwrap();
    for s in strategies() {
        group.bench_function(format!("{s:?}"), |b| {
            exec::set_strategy(s);
            b.iter(|| linfty_transfer(&ex.contraction, &ex.codifferential, 100).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, dgla, random);
criterion_main!(benches);
