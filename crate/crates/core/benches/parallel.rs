use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symroof::families::{family_to_density, monte_carlo_twirl};
use symroof::oracle::{min_on_iso_fiber, SearchBudget};
use symroof::{Execution, FamilyPoint, MonotoneSpec, SymmetryGroup};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn twirl(c: &mut Criterion) {
    let rho = family_to_density(&FamilyPoint::oo(0.3, 0.4, 3).unwrap()).unwrap();
    let mut group = c.benchmark_group("monte_carlo_twirl");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 4096), &exec, |b, &exec| {
            b.iter(|| monte_carlo_twirl(black_box(&rho), SymmetryGroup::Werner, 4096, 7, exec))
        });
    }
    group.finish();
}

fn fiber_oracle(c: &mut Criterion) {
    let spec = MonotoneSpec::entropy();
    let mut group = c.benchmark_group("iso_fiber_multistart");
    group.sample_size(10);
    for (name, exec) in MODES {
        let budget = SearchBudget::new(32, 500, 1).with_execution(exec);
        group.bench_with_input(BenchmarkId::new(name, "32x500"), &budget, |b, budget| {
            b.iter(|| min_on_iso_fiber(&spec, black_box(0.7), 4, budget).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, twirl, fiber_oracle);
criterion_main!(benches);
