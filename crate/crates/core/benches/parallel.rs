use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracmp::functional::ProblemSpec;
use fracmp::mpa::{construct_e, mpa_solve, MpaConfig};
use fracmp::spaces::{verify_embeddings, VerifyOptions};
use fracmp::Exec;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn embeddings(c: &mut Criterion) {
    let spec = ProblemSpec::default();
    let mut group = c.benchmark_group("verify_embeddings_200");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        let opts = VerifyOptions {
            exec,
            ..VerifyOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| verify_embeddings(200, &spec, opts).unwrap())
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let spec = ProblemSpec::default();
    let setup = construct_e(&spec, 0.2).unwrap();
    let mut group = c.benchmark_group("mpa_solve_default");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        let cfg = MpaConfig {
            exec,
            ..MpaConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| mpa_solve(&spec, &setup, cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, embeddings, solve);
criterion_main!(benches);
