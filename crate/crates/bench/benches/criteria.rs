use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mlsi_bench::{hq, measures, power};
use mlsi_core::hardy::poincare_bounds;
use mlsi_core::mlsi::{b_q, c_phi, classify, gamma, ClassifyMode, ClassifyTarget};
use mlsi_core::{PotentialFamily, PotentialSpec};

fn brackets(c: &mut Criterion) {
    let mut g = c.benchmark_group("poincare_bounds");
    for (name, mu) in measures() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mu, |b, mu| {
            b.iter(|| poincare_bounds(black_box(mu), mu).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("b_q");
    g.sample_size(20);
    for (name, mu) in measures() {
        g.bench_with_input(BenchmarkId::new(name, 3), &mu, |b, mu| b.iter(|| b_q(black_box(mu), mu, 3.0, None).unwrap()));
    }
    g.finish();

    let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p: 1.5 }).unwrap();
    let phi = power(3.0);
    c.bench_function("c_phi/pl1.5/power3", |b| b.iter(|| c_phi(black_box(&phi), &mu, &mu).unwrap()));
}

fn classifier(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    for p in [1.2, 1.5, 3.0] {
        let mu = PotentialSpec::new(PotentialFamily::PowerLaw { p }).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(p), &mu, |b, mu| {
            b.iter(|| classify(black_box(mu), &ClassifyTarget::Q(3.0), ClassifyMode::Critq).unwrap())
        });
    }
    g.finish();
}

fn variational(c: &mut Criterion) {
    let mu = PotentialSpec::new(PotentialFamily::DoubleExp).unwrap();
    let phi = power(3.0);
    c.bench_function("gamma/double_exp/x=2", |b| {
        b.iter(|| gamma(&phi, &mu, 0.0, black_box(2.0), 1.0).unwrap())
    });

    let h = hq(3.0);
    c.bench_function("omega/H_3/t=2.5", |b| b.iter(|| h.omega(black_box(2.5))));
}

criterion_group!(benches, brackets, classifier, variational);
criterion_main!(benches);
