use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use missing_kmeans::harness::{gen_mixture, MixtureSpec};
use missing_kmeans::oracle::{exact_k_means_with, ExactOptions};
use missing_kmeans::solver::{run_trials, SolveParams};
use missing_kmeans::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn mixture(n: usize, k: usize) -> missing_kmeans::Dataset {
    gen_mixture(&MixtureSpec {
        k,
        n,
        d: 8,
        delta: 1,
        separation: 20.0,
        noise_sigma: 1.0,
        missing_rate: 0.1,
        seed: 1,
    })
    .unwrap()
    .data
}

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_trials");
    group.sample_size(10);
    for n in [2_000, 20_000] {
        let data = mixture(n, 2);
        for (name, execution) in MODES {
            let params = SolveParams::new(2, 1.0)
                .with_repeats(16)
                .with_seed(3)
                .with_execution(execution);
            group.bench_with_input(BenchmarkId::new(name, n), &data, |b, data| {
                b.iter(|| run_trials(data, &params).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_k_means");
    group.sample_size(10);
    let data = mixture(11, 3);
    for (name, execution) in MODES {
        let options = ExactOptions {
            execution,
            ..Default::default()
        };
        group.bench_function(name, |b| b.iter(|| exact_k_means_with(&data, 3, options).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, trials, oracle);
criterion_main!(benches);
