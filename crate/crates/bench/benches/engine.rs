use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use kgbb_core::engine::{CreateRequest, Engine, ResourceRef};
use kgbb_core::fixtures::{demo_engine, demo_spec, demo_user};
use kgbb_core::synth::{run_ops, Synth};
use kgbb_core::templates::{render_dynamic_label, render_mind_map};
use kgbb_core::*;

fn u(s: &str) -> Upri {
    Upri::new(s).unwrap()
}

fn travel(i: usize) -> CreateRequest {
    let city = |n: &str| ResourceRef::with_id(u(&format!("ex:{n}-{i}")), ResourceKind::NamedIndividual, u("ex:City"), n);
    CreateRequest::new(u("demo:travel"))
        .subject(ResourceRef::with_id(u(&format!("ex:p-{i}")), ResourceKind::NamedIndividual, u("ex:Person"), "someone"))
        .input(u("travel:departureLocation"), city("from"))
        .input(u("travel:destinationLocation"), city("to"))
}

fn create(c: &mut Criterion) {
    c.bench_function("create 100 travel statements", |b| {
        b.iter_batched(
            || Engine::seeded(Arc::new(demo_spec()), 1),
            |mut e| {
                for i in 0..100 {
                    e.create(&travel(i), &demo_user()).unwrap();
                }
                e
            },
            BatchSize::SmallInput,
        )
    });
    c.bench_function("500 random operations", |b| {
        b.iter_batched(
            || (Engine::seeded(Arc::new(demo_spec()), 2), Synth::new(2)),
            |(mut e, mut s)| run_ops(&mut e, &mut s, 500),
            BatchSize::SmallInput,
        )
    });
}

fn read(c: &mut Criterion) {
    let (e, d) = demo_engine().unwrap();
    c.bench_function("dynamic label", |b| b.iter(|| render_dynamic_label(e.store(), e.spec(), black_box(&d.travel)).unwrap()));
    c.bench_function("mind map", |b| b.iter(|| render_mind_map(e.store(), e.spec(), black_box(&d.travel)).unwrap()));
}

fn query(c: &mut Criterion) {
    let mut e = kgbb_bench::engine(1000);
    let drafts = kgbb_bench::questions(&e, 50);
    let ids: Vec<Upri> = drafts.iter().filter_map(|d| e.save_question(d, &demo_user()).ok()).collect();
    c.bench_function("answer 50 questions on 1000 units", |b| {
        b.iter(|| {
            for id in &ids {
                black_box(e.answer(id).unwrap());
            }
        })
    });
}

criterion_group!(benches, create, read, query);
criterion_main!(benches);
