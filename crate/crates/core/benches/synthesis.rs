//! Sequential vs parallel execution of batch synthesis and selftest trials.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use triqc::batch::{synthesize_batch, Execution};
use triqc::numkit::{haar_unitary, ComplexMatrix};
use triqc::selftest::{run_selftest, SelftestConfig};
use triqc::synth3q::SynthOptions;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_batch_synthesize(c: &mut Criterion) {
    let opts = SynthOptions::default();
    let mut group = c.benchmark_group("batch_synthesize");
    for n in [16usize, 64] {
        let us: Vec<ComplexMatrix> = (0..n as u64).map(|s| haar_unitary(8, s)).collect();
        group.throughput(Throughput::Elements(n as u64));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &us, |b, us| {
                b.iter(|| synthesize_batch(black_box(us), &opts, exec))
            });
        }
    }
    group.finish();
}

fn bench_selftest(c: &mut Criterion) {
    let mut group = c.benchmark_group("selftest_trials");
    group.sample_size(10);
    for trials in [10usize, 100] {
        for (name, execution) in MODES {
            let cfg = SelftestConfig {
                trials,
                execution,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(name, trials), &cfg, |b, cfg| {
                b.iter(|| run_selftest(black_box(cfg)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_batch_synthesize, bench_selftest);
criterion_main!(benches);
