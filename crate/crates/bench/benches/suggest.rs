use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rasmi_bench::corpus;
use rasmi_core::suggest::AlignmentHistory;

fn suggest(c: &mut Criterion) {
    let mut group = c.benchmark_group("suggest/history");
    for n in [100, 1_000, 10_000] {
        let recs = corpus(n);
        let mut history = AlignmentHistory::new();
        for r in &recs {
            history.ingest(r).unwrap();
        }
        let probe: Vec<(Vec<&str>, Vec<&str>)> =
            recs.iter().take(50).map(|r| (r.informal_tokens(), r.formal_tokens())).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &probe, |b, probe| {
            b.iter(|| {
                for (i, f) in probe {
                    black_box(history.suggest(i, f));
                }
            })
        });
    }
    group.finish();

    let recs = corpus(1_000);
    c.bench_function("suggest/rebuild-1000", |b| b.iter(|| AlignmentHistory::rebuild(black_box(&recs))));
    c.bench_function("suggest/diagonal", |b| {
        let empty = AlignmentHistory::new();
        let (i, f) = (recs[0].informal_tokens(), recs[0].formal_tokens());
        b.iter(|| empty.suggest(black_box(&i), black_box(&f)))
    });
}

criterion_group!(benches, suggest);
criterion_main!(benches);
