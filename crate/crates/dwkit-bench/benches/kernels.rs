use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use dwkit::anomalies::abelian_extension;
use dwkit::{anomaly_report, builtin_group, catalog_cocycle, cohomology, dw_partition_torus};
use serde_json::json;

fn group(name: &str, params: serde_json::Value) -> Arc<dwkit::FiniteGroup> {
    Arc::new(builtin_group(name, &params).unwrap())
}

fn bench_cohomology(c: &mut Criterion) {
    let d8 = group("dihedral", json!({"order": 8}));
    let z6 = group("cyclic", json!({"n": 6}));
    c.bench_function("cohomology H3(D8)", |b| b.iter(|| cohomology(&d8, 3).unwrap()));
    c.bench_function("cohomology H3(Z6)", |b| b.iter(|| cohomology(&z6, 3).unwrap()));
}

fn bench_torus(c: &mut Criterion) {
    let w = catalog_cocycle("omega_d8", &json!({"k": 1})).unwrap();
    let z = catalog_cocycle("omega3", &json!({"n": 12, "k": 5})).unwrap();
    c.bench_function("torus Z(T3) D8", |b| b.iter(|| dw_partition_torus(&w).unwrap()));
    c.bench_function("torus Z(T3) Z12", |b| b.iter(|| dw_partition_torus(&z).unwrap()));
}

fn bench_anomaly(c: &mut Criterion) {
    let ext = abelian_extension(2, 2).unwrap();
    let omega = catalog_cocycle("omega3", &json!({"n": 2, "k": 1})).unwrap();
    c.bench_function("anomaly Z2 -> Z4 -> Z2", |b| b.iter(|| anomaly_report(&ext, &omega, 1).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_cohomology, bench_torus, bench_anomaly
}
criterion_main!(benches);
