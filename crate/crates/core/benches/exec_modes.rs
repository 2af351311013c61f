use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use koca::aks::LemmaScope;
use koca::ioca::boolean;
use koca::translate::koca_to_aks;
use koca::tripos::koca_tripos_suite;
use koca::{Coverage, Exec, Limits};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn koca_suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("koca-suite");
    for n in [3, 4] {
        let k = boolean(n).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("boolean:{n}")), &k, |b, k| {
                b.iter(|| black_box(k.suite(exec).unwrap()))
            });
        }
    }
    g.finish();
}

fn aks_lemmas(c: &mut Criterion) {
    let limits = Limits::default();
    let aks = koca_to_aks(&boolean(3).unwrap()).unwrap();
    let mut g = c.benchmark_group("aks-lemmas");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| black_box(aks.verify_lemmas(&limits, exec, LemmaScope::Closed).unwrap()))
        });
    }
    g.finish();
}

fn tripos(c: &mut Criterion) {
    let limits = Limits::default();
    let k = boolean(2).unwrap();
    let mut g = c.benchmark_group("tripos");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| black_box(koca_tripos_suite(&k, 3, &Coverage::default(), &limits, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, koca_suite, aks_lemmas, tripos);
criterion_main!(benches);
