use std::collections::BTreeSet;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sl1::contraction::contract;
use sl1::semantics::{eval_sl, Env};
use sl1::solver::gen::{GenConfig, Generator};
use sl1::solver::{check_finite_sat, check_infinite_sat, oracle_sat_sl, SolverConfig};
use sl1::structure::{Heap, SlStructure};
use sl1::syntax::{parse_sl, Var};

const SENTENCES: &[(&str, &str)] = &[
    ("total_heap", "forall y. alloc(y)"),
    ("two_cells", "exists x, y. forall z. x ~> y & ~x = y & ~z ~> x"),
    ("list_shape", "exists x1, x2. forall y1, y2. (x1 ~> y1 -> ~x2 = y1) & |h| >= 2 & ~|h| >= 4"),
    ("wand", "exists x. forall y. (x |-> y -* |h| >= 2) | ~alloc(y)"),
];

fn finite(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("check_finite_sat");
    for (name, text) in SENTENCES {
        let phi = parse_sl(text).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &phi, |b, phi| {
            b.iter(|| check_finite_sat(black_box(phi), &cfg).unwrap())
        });
    }
    group.finish();
}

fn infinite(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("check_infinite_sat");
    group.sample_size(10);
    for text in ["forall y. alloc(y)", "exists x. ~alloc(x) & |h| >= 2"] {
        let phi = parse_sl(text).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(text), &phi, |b, phi| {
            b.iter(|| check_infinite_sat(black_box(phi), &cfg).unwrap())
        });
    }
    group.finish();
}

fn solver_against_oracle(c: &mut Criterion) {
    let mut g = Generator::new(7);
    let sentences: Vec<_> = (0..20).map(|_| g.bsr_sentence(&GenConfig::default())).collect();
    let cfg = SolverConfig {
        max_steps: 5_000_000,
        ..SolverConfig::default()
    };
    let mut group = c.benchmark_group("random_sentences");
    group.sample_size(10);
    group.bench_function("solver", |b| {
        b.iter(|| {
            for phi in &sentences {
                black_box(check_finite_sat(phi, &cfg).unwrap());
            }
        })
    });
    group.bench_function("oracle_to_4", |b| {
        b.iter(|| {
            for phi in &sentences {
                black_box(oracle_sat_sl(phi, 4, 5_000_000).unwrap());
            }
        })
    });
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let phi = parse_sl("exists x. forall y. (x |-> y -* |h| >= 2) | ~alloc(y)").unwrap();
    let mut group = c.benchmark_group("eval_sl");
    for u in [2usize, 3, 4] {
        let heap: Heap = (0..u).map(|l| (l, (l + 1) % u)).collect();
        let s = SlStructure::with_size(u, [], heap).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(u), &s, |b, s| {
            b.iter(|| eval_sl(black_box(s), &phi, &Env::new()).unwrap())
        });
    }
    group.finish();
}

fn contraction(c: &mut Criterion) {
    let xs: BTreeSet<Var> = [Var::new("x")].into();
    let mut group = c.benchmark_group("contract");
    for len in [100usize, 1_000, 10_000] {
        let heap: Heap = (0..len - 1).map(|l| (l, l + 1)).collect();
        let s = SlStructure::with_size(len, [(Var::new("x"), 0)], heap).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(len), &s, |b, s| {
            b.iter(|| contract(black_box(s), 2, &xs, &BTreeSet::new()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, finite, infinite, solver_against_oracle, evaluation, contraction);
criterion_main!(benches);
