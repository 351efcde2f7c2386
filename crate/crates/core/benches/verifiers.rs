//! Sequential against data-parallel execution of the sampled verifiers.
//! Build with `--no-default-features` to compare against the fallback,
//! where both arms run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use leftheart::heart::{verify_cohomology_coherence, verify_heart_equivalence, verify_localization_agreement, HeartModel};
use leftheart::intlin::Z;
use leftheart::regular::{run_axiom, Ambient, Axiom, Predicate, RegularCategory};
use leftheart::sample::Bounds;
use leftheart::Execution;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn category(p: &str) -> RegularCategory<Z> {
    RegularCategory::new(Ambient::FgAb, Predicate::parse(p).unwrap()).unwrap()
}

fn axioms(c: &mut Criterion) {
    let cat = category("torsion-exponent:2");
    let b = Bounds::default().with_samples(200);
    let mut g = c.benchmark_group("axiom-R2");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| black_box(run_axiom(&cat, Axiom::R2, b, 1, exec).unwrap()))
        });
    }
    g.finish();
}

fn localization(c: &mut Criterion) {
    let cat = category("torsion-free");
    let b = Bounds::default().with_samples(200);
    let mut g = c.benchmark_group("localization-agreement");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| black_box(verify_localization_agreement(&cat, b, 1, exec).unwrap()))
        });
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    let cat = category("torsion-exponent:2");
    let b = Bounds::default().with_samples(50);
    let mut g = c.benchmark_group("cohomology-coherence");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| black_box(verify_cohomology_coherence(&cat, b, 1, exec).unwrap()))
        });
    }
    g.finish();
}

fn heart(c: &mut Criterion) {
    let model = HeartModel::new(category("torsion-free")).unwrap();
    let b = Bounds::default().with_samples(50);
    let mut g = c.benchmark_group("heart-equivalence");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| black_box(verify_heart_equivalence(&model, b, 8, 1, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, axioms, localization, cohomology, heart);
criterion_main!(benches);
