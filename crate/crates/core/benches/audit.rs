//! Sequential (`jobs = 1`) against rayon (`jobs = 0`, every core) for the
//! two data-parallel paths: enumeration and the full audit. Built without
//! the `parallel` feature both arms run sequentially.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use ucsets::audit::{audit_all, AuditConfig};
use ucsets::search::{enumerate_codes, generators, EnumerationLimit};
use ucsets::Family;

const ARMS: [(&str, usize); 2] = [("sequential", 1), ("parallel", 0)];

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_n4");
    for (name, jobs) in ARMS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &jobs, |b, &jobs| {
            b.iter(|| enumerate_codes(black_box(4), EnumerationLimit::Standard, jobs).unwrap())
        });
    }
    g.finish();
}

fn audit(c: &mut Criterion) {
    let mut g = c.benchmark_group("audit_all");
    g.sample_size(10);
    for n in [3, 4] {
        for (name, jobs) in ARMS {
            g.bench_with_input(BenchmarkId::new(name, n), &jobs, |b, &jobs| {
                b.iter(|| audit_all(&AuditConfig::new(n).jobs(jobs)).unwrap())
            });
        }
    }
    g.finish();
}

fn closure(c: &mut Criterion) {
    let gens = generators(16, 1000, 16).unwrap();
    let f = Family::from_masks(16, gens).unwrap();
    c.bench_function("closure_n16_1000", |b| {
        b.iter(|| black_box(&f).union_closure())
    });
}

criterion_group!(benches, enumeration, audit, closure);
criterion_main!(benches);
