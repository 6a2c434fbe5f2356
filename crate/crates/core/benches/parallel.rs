//! Sequential vs rayon execution of the data-parallel loops.
//!
//! Built without the `parallel` feature, both variants run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pathsum_equiv::counter::brute_force_count_with;
use pathsum_equiv::gen::{
    equivalent_variant, qft, random_circuit, random_wmc_instance, seeded_rng, GateSet,
};
use pathsum_equiv::matrix::unitary_oracle_with;
use pathsum_equiv::{check_batch, BackendChoice, CheckConfig, Circuit, Exec, PathSum};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn path_sum_matrix(c: &mut Criterion) {
    let ps = PathSum::build(&qft(7)).unwrap();
    let mut g = c.benchmark_group("path_sum_to_matrix");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "qft7"), |b| {
            b.iter(|| ps.to_matrix_with(black_box(exec)).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut rng = seeded_rng(1);
    let circ = random_circuit(&mut rng, 9, 60, GateSet::Mixed);
    let mut g = c.benchmark_group("unitary_oracle");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "n9"), |b| {
            b.iter(|| unitary_oracle_with(&circ, black_box(exec)).unwrap())
        });
    }
    g.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut rng = seeded_rng(2);
    let mut inst = random_wmc_instance(&mut rng, 20, false);
    while inst.var_count < 18 {
        inst = random_wmc_instance(&mut rng, 20, false);
    }
    let mut g = c.benchmark_group("brute_force_count");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, inst.var_count), |b| {
            b.iter(|| brute_force_count_with(&inst, BackendChoice::Exact, black_box(exec)).unwrap())
        });
    }
    g.finish();
}

fn batch(c: &mut Criterion) {
    let mut rng = seeded_rng(3);
    let pairs: Vec<(Circuit, Circuit)> = (0..64)
        .map(|_| {
            let circ = random_circuit(&mut rng, 4, 20, GateSet::Mixed);
            let other = equivalent_variant(&circ, &mut rng, 4);
            (circ, other)
        })
        .collect();
    let cfg = CheckConfig::default();
    let mut g = c.benchmark_group("check_batch");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, pairs.len()), |b| {
            b.iter(|| check_batch(&pairs, &cfg, black_box(exec)))
        });
    }
    g.finish();
}

criterion_group!(benches, path_sum_matrix, oracle, brute_force, batch);
criterion_main!(benches);
