use criterion::{criterion_group, criterion_main, Criterion};
use kgbb_core::backends::*;

fn codecs(c: &mut Criterion) {
    let store = kgbb_bench::engine(200).into_store();
    let trig = export_rdf(&store);
    let pg = export_pg(&store);
    let tables = export_tables(&store);
    let mut g = c.benchmark_group("codecs/200 units");
    g.bench_function("trig export", |b| b.iter(|| export_rdf(&store)));
    g.bench_function("trig import", |b| b.iter(|| import_rdf(&trig).unwrap()));
    g.bench_function("pg-json export", |b| b.iter(|| export_pg(&store)));
    g.bench_function("pg-json import", |b| b.iter(|| import_pg(&pg).unwrap()));
    g.bench_function("tables export", |b| b.iter(|| export_tables(&store)));
    g.bench_function("tables import", |b| b.iter(|| import_tables(&tables).unwrap()));
    g.finish();
}

criterion_group!(benches, codecs);
criterion_main!(benches);
