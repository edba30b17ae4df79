use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lu_orbit::harness::{survey, verify_theorem1, Execution};
use lu_orbit::stabilizer::stabilize;
use lu_orbit::states::random_density;
use lu_orbit::{PartyDims, TolerancePolicy};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_survey(c: &mut Criterion) {
    let tol = TolerancePolicy::default();
    let mut group = c.benchmark_group("survey");
    group.sample_size(10);
    for dims in ["2,2,2", "2,3,4", "2,2,2,2"] {
        let d: PartyDims = dims.parse().unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, &d), &d, |b, d| {
                b.iter(|| survey(black_box(d), 50, 7, d.total(), &tol, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_theorem1(c: &mut Criterion) {
    let tol = TolerancePolicy::default();
    let mut group = c.benchmark_group("verify_theorem1_5x5");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| verify_theorem1(5, 5, &tol, exec).unwrap()));
    }
    group.finish();
}

fn bench_stabilize(c: &mut Criterion) {
    let tol = TolerancePolicy::default();
    let mut group = c.benchmark_group("stabilize");
    for dims in ["2,2", "3,4", "5,5", "2,3,4"] {
        let d: PartyDims = dims.parse().unwrap();
        let rho = random_density(&d, d.total(), 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(&d), &rho, |b, rho| {
            b.iter(|| stabilize(black_box(rho.matrix()), &d, &tol).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_survey, bench_theorem1, bench_stabilize);
criterion_main!(benches);
