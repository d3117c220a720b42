use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qchain::config::parse_config;
use qchain::par::Execution;
use qchain::sweep::run_sweep;

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, text) in [
        ("L8_bands_spacing", "L = 8\ncoupling = A\nrandom = true\nensemble = 4\nvalues = 0.01, 0.1, 1, 10\nobservables = bands, spacing"),
        ("L8_npc_sigma", "L = 8\nvalues = 0.01, 0.1, 1, 10\nobservables = npc, sigma"),
    ] {
        for mode in [Execution::Sequential, Execution::Parallel] {
            let mut cfg = parse_config(text, &[]).unwrap();
            cfg.execution = mode;
            group.bench_with_input(BenchmarkId::new(name, format!("{mode:?}")), &cfg, |b, cfg| {
                b.iter(|| run_sweep(cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
