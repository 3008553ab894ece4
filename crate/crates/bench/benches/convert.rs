use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rasmi_bench::{example_sentences, long_sentence};
use rasmi_core::Converter;

fn convert(c: &mut Criterion) {
    let conv = Converter::default();
    let examples = example_sentences();

    c.bench_function("convert/examples", |b| {
        b.iter(|| {
            for s in &examples {
                black_box(conv.convert(black_box(s)));
            }
        })
    });

    let mut group = c.benchmark_group("convert/long");
    for n in [1, 4, 16] {
        let s = long_sentence(n);
        group.throughput(Throughput::Elements(s.split(' ').count() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| b.iter(|| conv.convert(black_box(s))));
    }
    group.finish();
}

fn load(c: &mut Criterion) {
    c.bench_function("convert/load-default-data", |b| b.iter(Converter::default));
}

criterion_group!(benches, convert, load);
criterion_main!(benches);
