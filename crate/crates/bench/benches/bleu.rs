use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rasmi_bench::corpus;
use rasmi_core::eval::{evaluate_corpus, BleuConfig};

fn bleu(c: &mut Criterion) {
    let cfg = BleuConfig::default();
    let mut group = c.benchmark_group("bleu/corpus");
    for n in [100, 1_000, 10_000] {
        let recs = corpus(n);
        let refs: Vec<&str> = recs.iter().map(|r| r.formal.as_str()).collect();
        // the informal side as a weak hypothesis
        let hyps: Vec<&str> = recs.iter().map(|r| r.informal.as_str()).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &(hyps, refs), |b, (h, r)| {
            b.iter(|| evaluate_corpus(black_box(h), black_box(r), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bleu);
criterion_main!(benches);
