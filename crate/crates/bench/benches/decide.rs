use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ordrefl_bench::{long_worms, sequents, theories, worm_formulas};
use ordrefl_core::formula::{derives, Decider};
use ordrefl_core::oracle::{decide_oracle, OracleBudget};
use ordrefl_core::theory::{reduce, ReflClass};
use ordrefl_core::worm::worm_ordinal;

fn decide(c: &mut Criterion) {
    let mut group = c.benchmark_group("derives");
    for (name, a, b) in sequents() {
        group.bench_function(name, |bench| bench.iter(|| derives(black_box(&a), black_box(&b))));
    }
    group.finish();

    let worms = worm_formulas(2, 3);
    c.bench_function("derives/all pairs of 40 worms", |bench| {
        bench.iter(|| {
            let mut dec = Decider::new();
            worms.iter().flat_map(|a| worms.iter().map(move |b| (a, b))).filter(|(a, b)| dec.derives(a, b)).count()
        })
    });
}

fn oracle(c: &mut Criterion) {
    let budget = OracleBudget::default();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    for (name, a, b) in sequents() {
        group.bench_function(name, |bench| bench.iter(|| decide_oracle(black_box(&a), black_box(&b), &budget)));
    }
    group.finish();
}

fn ordinals(c: &mut Criterion) {
    let worms = long_worms();
    c.bench_function("worm_ordinal/long worms", |bench| {
        bench.iter(|| worms.iter().map(|w| worm_ordinal(black_box(w))).collect::<Vec<_>>())
    });
}

fn theory(c: &mut Criterion) {
    let exprs = theories();
    c.bench_function("reduce/to bPi03 then Pi1", |bench| {
        bench.iter(|| {
            for e in &exprs {
                let _ = reduce(black_box(e), ReflClass::BoldPi0(3));
                let _ = reduce(black_box(e), ReflClass::Pi(1));
            }
        })
    });
}

criterion_group!(benches, decide, oracle, ordinals, theory);
criterion_main!(benches);
