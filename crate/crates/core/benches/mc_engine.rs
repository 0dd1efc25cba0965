use std::hint::black_box;

use asian_lv::mc_engine::{simulate_asian_batch, McConfig};
use asian_lv::{Execution, LocalVolFn, MarketParams, OptionSpec, Side};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn strikes(t: f64) -> Vec<OptionSpec> {
    [(100.0, Side::Call), (110.0, Side::Call), (120.0, Side::Call), (70.0, Side::Put), (85.0, Side::Put), (95.0, Side::Put)]
        .iter()
        .map(|&(k, s)| OptionSpec::fixed(k, t, s).unwrap())
        .collect()
}

fn bench_paths(c: &mut Criterion) {
    let market = MarketParams::spot(100.0).unwrap();
    let opts = strikes(0.5);
    let models = [("bs", LocalVolFn::constant(0.3).unwrap()), ("cev", LocalVolFn::cev(0.3, -0.5, 100.0).unwrap())];

    let mut group = c.benchmark_group("mc_batch");
    group.sample_size(10);
    for paths in [20_000usize, 100_000] {
        group.throughput(Throughput::Elements(paths as u64));
        for (name, model) in &models {
            for exec in [Execution::Sequential, Execution::Parallel] {
                let cfg = McConfig {
                    paths,
                    steps: 200,
                    seed: 1,
                    execution: exec,
                    ..McConfig::default()
                };
                let id = BenchmarkId::new(format!("{name}/{exec:?}"), paths);
                group.bench_with_input(id, &cfg, |b, cfg| {
                    b.iter(|| simulate_asian_batch(model, &market, black_box(&opts), cfg).unwrap())
                });
            }
        }
    }
    group.finish();
}

criterion_group!(benches, bench_paths);
criterion_main!(benches);
