//! Compares the rayon-backed fan-out paths against plain sequential loops
//! on the workloads that actually parallelize: the Jacobi sweep over all
//! coordinate triples, bracket-table generation over coordinate pairs, and
//! the randomized identity suite.
//!
//! Build with the default features to measure the parallel paths
//! (`jacobi_report`, `bracket_table`, `operator_identity_suite` fan out
//! internally); the explicitly sequential baselines here always run on one
//! thread. Running the same bench with `--no-default-features` makes both
//! sides sequential, which is a useful sanity check that results agree.

use casimir_core::exterior::increasing_tuples;
use casimir_core::fixtures::{self, FixtureProblem};
use casimir_core::scalar::Scalar;
use casimir_core::volume::{jacobi_report, jacobi_sum_triple};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_jacobi(c: &mut Criterion) {
    let fixture = fixtures::gl3().unwrap();
    let FixtureProblem::Odd(problem) = &fixture.problem else { panic!() };
    let lambda = problem.bivector().unwrap();
    let dim = problem.chart().dim();

    let mut group = c.benchmark_group("jacobi_sweep_gl3");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let mut failures = 0usize;
            for t in increasing_tuples(dim, 3) {
                if !jacobi_sum_triple(black_box(&lambda), t[0], t[1], t[2]).unwrap().is_zero() {
                    failures += 1;
                }
            }
            assert_eq!(failures, 0);
        })
    });
    group.bench_function("engine", |b| {
        b.iter(|| {
            let report = jacobi_report(black_box(&lambda)).unwrap();
            assert!(report.all_passed());
        })
    });
    group.finish();
}

fn bench_bracket_table(c: &mut Criterion) {
    let fixture = fixtures::gl3().unwrap();
    let FixtureProblem::Odd(problem) = &fixture.problem else { panic!() };
    let dim = problem.chart().dim();

    let mut group = c.benchmark_group("bracket_table_gl3");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let mut nonzero = 0usize;
            for idx in increasing_tuples(dim, 2) {
                let value = problem
                    .bracket(&Scalar::var(dim, idx[0]), &Scalar::var(dim, idx[1]))
                    .unwrap();
                if !value.is_zero() {
                    nonzero += 1;
                }
            }
            assert_eq!(nonzero, 15);
        })
    });
    group.bench_function("engine", |b| {
        b.iter(|| {
            let table = problem.bracket_table().unwrap();
            assert_eq!(table.len(), 15);
        })
    });
    group.finish();
}

fn bench_identity_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("identity_suite_dim4");
    group.sample_size(10);
    group.bench_function("engine", |b| {
        b.iter(|| {
            let report = casimir_core::suite::operator_identity_suite(2, 12, 99).unwrap();
            assert!(report.all_passed());
        })
    });
    group.finish();
}

criterion_group!(benches, bench_jacobi, bench_bracket_table, bench_identity_suite);
criterion_main!(benches);
