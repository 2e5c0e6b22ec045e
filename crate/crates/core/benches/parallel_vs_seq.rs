//! Compares the rayon-parallel and sequential execution paths on the
//! two workloads that dominate real runs: Bernoulli shot sampling and
//! batched exact protocol evaluation.
//!
//! The `parallel` feature flips the implementation, so a direct A/B in
//! one process is not possible; instead run the bench twice:
//!
//! ```text
//! cargo bench -p qswitch-core
//! cargo bench -p qswitch-core --no-default-features
//! ```
//!
//! and compare the saved criterion baselines.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qswitch_core::invariants::StateTuple;
use qswitch_core::linalg::haar_random_state;
use qswitch_core::protocol::{sample_protocol, Family, ProtocolSpec};

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn random_tuple(seed: u64, n: usize) -> StateTuple {
    StateTuple::from_pure(
        (0..n)
            .map(|i| haar_random_state(seed * 100 + i as u64, 2).unwrap())
            .collect(),
    )
    .unwrap()
}

fn bench_shot_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("shot_sampling/{MODE}"));
    let tuple = random_tuple(7, 3);
    for shots in [10_000u64, 1_000_000] {
        let spec = ProtocolSpec {
            shots,
            seed: 42,
            ..ProtocolSpec::exact(3, 2, Family::Main).unwrap()
        };
        group.bench_with_input(BenchmarkId::from_parameter(shots), &spec, |b, spec| {
            b.iter(|| sample_protocol(&tuple, spec).unwrap())
        });
    }
    group.finish();
}

fn bench_exact_protocol(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("exact_protocol/{MODE}"));
    for n in [5usize, 9] {
        let tuple = random_tuple(n as u64, n);
        let spec = ProtocolSpec::exact(n, 2, Family::Main).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, spec| {
            b.iter(|| qswitch_core::protocol::odd_invariant_via_switch(&tuple, spec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_shot_sampling, bench_exact_protocol);
criterion_main!(benches);
