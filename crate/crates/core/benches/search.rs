use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use mmv::search::{refute, SearchBudget};
use mmv::{parse, Exec};

fn exhaustive_search(c: &mut Criterion) {
    // Valid, so every cell up to the budget is searched.
    let phi = parse("[](p -> q) -> ([]p -> []q) \\/ r").unwrap();
    let mut group = c.benchmark_group("refute-valid-m3-n3");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        let budget = SearchBudget { exec, ..SearchBudget::new(3, 3) };
        group.bench_function(name, |b| b.iter(|| refute(&[], black_box(&phi), &budget).unwrap()));
    }
    group.finish();
}

fn first_hit(c: &mut Criterion) {
    let phi = parse("<>p -> []p").unwrap();
    let mut group = c.benchmark_group("refute-first-hit");
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        let budget = SearchBudget { exec, ..SearchBudget::new(3, 3) };
        group.bench_function(name, |b| b.iter(|| refute(&[], black_box(&phi), &budget).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, exhaustive_search, first_hit);
criterion_main!(benches);
