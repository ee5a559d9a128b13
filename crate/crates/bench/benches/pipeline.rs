use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ternquart::covariants::recover_quartic;
use ternquart::idempotents::solve_idempotents;
use ternquart::quartic_geometry::{bitangent_candidates, is_bitangent, verify_theorem05};
use ternquart::reconstruct::roundtrip_check;
use ternquart::SolverConfig;
use ternquart_bench::fixtures;

fn stages(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    for (name, alg) in fixtures() {
        let mut g = c.benchmark_group(name);
        g.sample_size(20);
        g.bench_function("solve_idempotents", |b| b.iter(|| solve_idempotents(black_box(&alg), &cfg).unwrap()));
        g.bench_function("recover_quartic", |b| b.iter(|| recover_quartic(black_box(&alg)).unwrap()));

        let x = solve_idempotents(&alg, &cfg).unwrap();
        let f = recover_quartic(&alg).unwrap().form;
        let lines = bitangent_candidates(&alg, &x, &cfg).unwrap();
        g.bench_function("certify_28_bitangents", |b| {
            b.iter(|| lines.iter().filter(|l| is_bitangent(&f, l, &cfg).unwrap().is_bitangent).count())
        });
        g.bench_function("roundtrip", |b| b.iter(|| roundtrip_check(black_box(&alg), &cfg).unwrap()));
        g.sample_size(10);
        g.bench_function("verify_theorem05", |b| b.iter(|| verify_theorem05(black_box(&alg), &cfg).unwrap()));
        g.finish();
    }
}

criterion_group!(benches, stages);
criterion_main!(benches);
