//! Acceptance gate: one timed PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use kgbb_core::backends::*;
use kgbb_core::engine::{derive_granularity_trees, CreateRequest, Engine, EngineError, ResourceRef};
use kgbb_core::fixtures::{demo_engine, demo_spec, demo_user, BROKEN_SPECS, DEMO_SPEC, TRAVEL_OWL_JSON};
use kgbb_core::query::execute_compound;
use kgbb_core::spec::{check_spec_document, derive_owl, OwlProperty, OwlPropertyKind};
use kgbb_core::synth::{apply, random_engine, unit_kind_histogram, Synth};
use kgbb_core::templates::{render_category_label, render_dynamic_label};
use kgbb_core::*;

use common::{canonical, oracle_answer, oracle_tree, partition_violations};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn u(s: &str) -> Upri {
    Upri::new(s).unwrap()
}

fn named(id: &str, class: &str, label: &str) -> ResourceRef {
    ResourceRef::with_id(u(id), ResourceKind::NamedIndividual, u(class), label)
}

fn lit(v: &str, d: Datatype) -> Literal {
    Literal::new(v, d).unwrap()
}

fn demo() -> Engine {
    Engine::seeded(Arc::new(demo_spec()), 11)
}

fn travel_request() -> CreateRequest {
    CreateRequest::new(u("demo:travel"))
        .subject(named("ex:anna", "ex:Person", "Anna"))
        .input(u("travel:transportation"), named("ex:train-1", "ex:Train", "train"))
        .input(u("travel:departureLocation"), named("ex:berlin", "ex:City", "Berlin"))
        .input(u("travel:destinationLocation"), named("ex:rome", "ex:City", "Rome"))
        .input(u("travel:datetime"), lit("2019-08-05T00:00:00Z", Datatype::DateTime))
}

fn golden_label() -> Outcome {
    let mut e = demo();
    let unit = e.create(&travel_request(), &demo_user()).map_err(|x| x.to_string())?.unit;
    let got = render_dynamic_label(e.store(), e.spec(), &unit).map_err(|x| x.to_string())?;
    let want = "Anna travels by train from Berlin to Rome on the 5th of August 2019";
    ensure!(got == want, "got {got:?}");
    Ok(got)
}

fn golden_query() -> Outcome {
    let mut e = demo();
    let unit = e.create(&travel_request(), &demo_user()).map_err(|x| x.to_string())?.unit;
    let kind = membership_kind(e.store(), &unit).ok_or("travel statement has no membership kind")?;
    ensure!(kind == MembershipKind::Statement, "kind {kind:?}");
    let got = generate_membership_query(&unit, kind, Dialect::Cypher);
    let want = String::from("MATCH (n {current_version:\"true\"}) WHERE (\"") + unit.as_str() + "\" IN n.statementUnitURI) RETURN n";
    ensure!(got == want, "got {got:?}");
    Ok(got)
}

fn category_labels() -> Outcome {
    let (e, d) = demo_engine().map_err(|x| x.to_string())?;
    let want = [
        "This hand has part this thumb",
        "A hand can have part some thumb",
        "A hand typically has part some thumb",
        "Every hand necessarily has part some thumb",
    ];
    for (unit, w) in d.has_part.iter().zip(want) {
        let got = render_category_label(e.store(), e.spec(), unit).map_err(|x| x.to_string())?;
        ensure!(got == w, "got {got:?}, want {w:?}");
    }
    Ok("4 variants".into())
}

fn round_trips() -> Outcome {
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    let (mut largest, mut versions, mut deleted) = (0, 0, 0);
    for seed in 0..100u64 {
        let target = 10 + (seed as usize * 37) % 170;
        let store = random_engine(seed, target).into_store();
        ensure!(store.units.len() <= 200, "seed {seed}: {} units", store.units.len());
        largest = largest.max(store.units.len());
        versions += store.versions.len();
        deleted += store.units.values().filter(|x| x.meta().deleted_by.is_some()).count();
        for (k, n) in unit_kind_histogram(&store) {
            *kinds.entry(k).or_default() += n;
        }
        ensure!(import_rdf(&export_rdf(&store)).map_err(|x| x.to_string())? == store, "seed {seed}: trig differs");
        ensure!(import_pg(&export_pg(&store)).map_err(|x| x.to_string())? == store, "seed {seed}: pg-json differs");
        ensure!(import_tables(&export_tables(&store)).map_err(|x| x.to_string())? == store, "seed {seed}: tables differ");
    }
    ensure!(versions > 0 && deleted > 0, "no versions ({versions}) or deletes ({deleted}) exercised");
    Ok(format!("max {largest} units, {versions} versions, {deleted} deleted, kinds {kinds:?}"))
}

fn partition_fuzz() -> Outcome {
    let (mut applied, mut rejected) = (0, 0);
    for seed in 0..20u64 {
        let every_step = seed < 4;
        let mut e = Engine::seeded(Arc::new(demo_spec()), seed);
        let mut synth = Synth::new(seed);
        for step in 0..500 {
            let op = synth.next_op(e.store(), e.spec());
            let prov = synth.user();
            match apply(&mut e, &op, &prov) {
                Ok(()) => applied += 1,
                Err(_) => rejected += 1,
            }
            if every_step || step == 499 {
                let problems = partition_violations(e.store());
                ensure!(problems.is_empty(), "seed {seed} step {step}: {problems:?}");
            }
        }
    }
    Ok(format!("20 x 500 ops (4 checked after every op), {applied} applied, {rejected} rejected"))
}

fn versioning_replay() -> Outcome {
    let mut e = demo();
    let p = demo_user();
    let err = |x: EngineError| x.to_string();
    let unit = e.create(&travel_request(), &p).map_err(err)?.unit;
    let before_v1 = e.read(&unit, None).map_err(err)?.inputs();
    let v1 = e.create_version(&unit, &p).map_err(err)?;
    let snap1 = e.read(&unit, Some(&v1)).map_err(err)?;
    ensure!(snap1.inputs() == before_v1, "v1 does not capture the state it was taken from");
    e.update_position(&unit, &u("travel:destinationLocation"), &named("ex:paris", "ex:City", "Paris").into(), &p).map_err(err)?;
    let before_v2 = e.read(&unit, None).map_err(err)?.inputs();
    let v2 = e.create_version(&unit, &p).map_err(err)?;
    let snap2 = e.read(&unit, Some(&v2)).map_err(err)?;
    ensure!(snap2.inputs() == before_v2, "v2 does not capture the state it was taken from");
    e.update_position(&unit, &u("travel:destinationLocation"), &named("ex:madrid", "ex:City", "Madrid").into(), &p).map_err(err)?;
    e.soft_delete(&unit, &p, false).map_err(err)?;
    ensure!(e.read(&unit, Some(&v1)).map_err(err)? == snap1, "v1 snapshot changed");
    ensure!(e.read(&unit, Some(&v2)).map_err(err)? == snap2, "v2 snapshot changed");
    ensure!(snap1.inputs() != snap2.inputs(), "edits between versions are invisible");
    let history = e.history(&unit).map_err(err)?;
    ensure!(history.len() == 2 && history[1].upri == v2, "history {history:?}");
    ensure!(history[1].previous.as_ref() == Some(&v1), "v2.previous = {:?}", history[1].previous);
    let dead = e.read_including_deleted(&unit).map_err(err)?;
    ensure!(dead.meta.deleted_by == Some(p.creator.clone()) && dead.meta.deletion_date.is_some(), "deletion metadata missing");
    ensure!(dead.meta.creator == p.creator, "creator lost after delete");
    ensure!(e.read(&unit, None).is_err(), "deleted unit still reads as live");
    Ok(format!("v1 {v1}, v2 {v2}"))
}

fn query_oracle() -> Outcome {
    let mut e = random_engine(2024, 1000);
    let statements = e.store().statements().count();
    let mut synth = Synth::new(77);
    let prov = synth.user();
    let (mut boolean, mut wildcard, mut literal, mut nonempty) = (0, 0, 0, 0);
    let mut asked = 0;
    let mut tries = 0;
    while asked < 200 {
        tries += 1;
        ensure!(tries < 2000, "only {asked} questions could be generated");
        let Some(draft) = synth.question(e.store(), e.spec()) else { continue };
        let Ok(id) = e.save_question(&draft, &prov) else { continue };
        asked += 1;
        let q = e.store().units[&id].as_question().unwrap().clone();
        match q.mode {
            AnswerMode::Boolean => boolean += 1,
            AnswerMode::Retrieval => wildcard += 1,
        }
        if q.bindings.values().any(|b| matches!(b, Binding::Literal(_))) {
            literal += 1;
        }
        let answer = e.answer(&id).map_err(|x| x.to_string())?;
        let got: BTreeSet<Upri> = answer.units.iter().cloned().collect();
        let want = oracle_answer(e.store(), e.spec(), &q);
        ensure!(got == want, "question {id}: engine {} units, oracle {}", got.len(), want.len());
        ensure!(answer.holds == !want.is_empty(), "question {id}: holds flag");
        if !want.is_empty() {
            nonempty += 1;
        }
    }
    ensure!(boolean > 0 && wildcard > 0 && literal > 0, "mode mix {boolean}/{wildcard}/{literal}");
    let mut trees = 0;
    for _ in 0..100 {
        let Some(tree) = synth.question_tree(e.store(), 3) else { continue };
        let got = execute_compound(e.store(), e.spec(), &tree).map_err(|x| x.to_string())?;
        ensure!(got == oracle_tree(e.store(), e.spec(), &tree), "tree {tree:?}");
        trees += 1;
    }
    Ok(format!(
        "{} units ({statements} statements), 200 questions ({boolean} boolean, {wildcard} list, {literal} literal, {nonempty} non-empty), {trees} trees",
        e.store().units.len() - 200
    ))
}

fn spec_validation() -> Outcome {
    ensure!(BROKEN_SPECS.len() == 12, "{} broken specs", BROKEN_SPECS.len());
    for (name, code, text) in BROKEN_SPECS {
        let diags = check_spec_document(text);
        ensure!(diags.iter().any(|d| d.code == *code), "{name}: expected {code:?}, got {:?}", diags.iter().map(|d| d.code).collect::<Vec<_>>());
    }
    let demo = check_spec_document(DEMO_SPEC);
    ensure!(demo.is_empty(), "demo spec: {demo:?}");
    Ok("12 diagnostics, demo clean".into())
}

fn owl_travel() -> Outcome {
    let spec = demo_spec();
    let class = spec.statement_class(&u("demo:travel")).ok_or("no travel class")?;
    let got: BTreeSet<OwlProperty> = derive_owl(class).map_err(|x| x.to_string())?.into_iter().collect();
    let want: BTreeSet<OwlProperty> = serde_json::from_str::<Vec<OwlProperty>>(TRAVEL_OWL_JSON).map_err(|x| x.to_string())?.into_iter().collect();
    ensure!(got == want, "derived {got:#?}");
    let by_name: BTreeMap<&str, &OwlProperty> = got.iter().map(|p| (p.name.as_str(), p)).collect();
    let to = by_name.get("travelsTo").ok_or("no travelsTo")?;
    ensure!(
        to.kind == OwlPropertyKind::Object
            && to.sub_property_of == PositionLink::Required
            && to.domain == Some(u("ex:Person"))
            && to.range == Some(u("ex:Location")),
        "travelsTo {to:?}"
    );
    for n in ["travelsFrom", "travelsWith"] {
        let p = by_name.get(n).ok_or(format!("no {n}"))?;
        ensure!(p.kind == OwlPropertyKind::Object && p.sub_property_of == PositionLink::Optional, "{n} {p:?}");
    }
    let on = by_name.get("travelsOn").ok_or("no travelsOn")?;
    ensure!(on.kind == OwlPropertyKind::Datatype && on.range.as_ref().is_some_and(|r| r.as_str().ends_with("#dateTime")), "travelsOn {on:?}");
    Ok(format!("{} properties", got.len()))
}

fn loop_partonomy() -> Outcome {
    let mut e = demo();
    let p = demo_user();
    let err = |x: EngineError| x.to_string();
    let organism = e
        .create(
            &CreateRequest::new(u("demo:material-entity-item"))
                .subject(named("ex:organism-x", "ex:Organism", "organism X"))
                .cascade(CreateRequest::new(u("demo:has-part")).input(u("demo:part"), named("ex:head-y", "ex:Head", "head Y"))),
            &p,
        )
        .map_err(err)?
        .unit;
    let store = e.store();
    let head_item = store
        .units
        .values()
        .find(|x| x.meta().kgbb_uri.as_str() == "demo:material-entity-item" && x.meta().subject.as_ref() == Some(&u("ex:head-y")))
        .map(|x| x.upri().clone())
        .ok_or("head item was not created")?;
    let organism_unit = store.unit(&organism).and_then(SemanticUnit::as_compound).ok_or("organism item missing")?;
    ensure!(organism_unit.linked.contains(&head_item), "organism item does not link the head item");
    let part_of = store
        .live_statements()
        .find(|s| s.meta.kgbb_uri.as_str() == "demo:has-part" && s.subject() == &u("ex:organism-x"))
        .ok_or("has-part statement missing")?;
    ensure!(part_of.object_described_by.contains(&head_item), "head object is not described by the head item");
    e.create(&CreateRequest::new(u("demo:has-part")).associate_with(head_item.clone()).input(u("demo:part"), named("ex:eye-z", "ex:Eye", "eye Z")), &p)
        .map_err(err)?;
    let trees = derive_granularity_trees(e.store(), e.spec(), Some(&u("demo:has-part"))).map_err(|x| x.to_string())?;
    ensure!(trees.len() == 1, "{} trees", trees.len());
    let t = &trees[0];
    ensure!(t.root == u("ex:organism-x"), "root {}", t.root);
    ensure!(t.nodes == BTreeSet::from([u("ex:organism-x"), u("ex:head-y"), u("ex:eye-z")]), "nodes {:?}", t.nodes);
    ensure!(t.edges.len() == 2, "edges {:?}", t.edges);
    Ok(format!("head item {head_item}, tree of {} nodes", t.nodes.len()))
}

fn cascade_atomicity() -> Outcome {
    let (mut e, _) = demo_engine().map_err(|x| x.to_string())?;
    let p = demo_user();
    let bad_value = CreateRequest::new(u("demo:measurement-item")).subject(named("ex:pear-1", "ex:Apple", "pear")).cascade(
        CreateRequest::new(u("demo:has-quality")).input(u("demo:quality"), named("ex:weight-9", "obo:PATO_0000128", "weight")).cascade(
            CreateRequest::new(u("demo:weight-measurement"))
                .input(u("demo:value"), lit("heavy", Datatype::String))
                .input(u("demo:unit"), u("ex:kilogram")),
        ),
    );
    let bad_part = CreateRequest::new(u("demo:material-entity-item"))
        .subject(named("ex:organism-q", "ex:Organism", "organism Q"))
        .cascade(CreateRequest::new(u("demo:has-part")).input(u("demo:part"), named("ex:head-q", "ex:Head", "head Q")))
        .cascade(CreateRequest::new(u("demo:has-part")).input(u("demo:part"), named("ex:tail-q", "ex:Location", "tail")));
    let mut errors = Vec::new();
    for req in [bad_value, bad_part] {
        let before = (canonical(e.store()), export_rdf(e.store()));
        match e.create(&req, &p) {
            Ok(c) => return Err(format!("invalid cascade accepted as {}", c.unit)),
            Err(x) => errors.push(x.to_string()),
        }
        ensure!((canonical(e.store()), export_rdf(e.store())) == before, "store changed after rejected create");
    }
    Ok(errors.join(" | "))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "travel dynamic label", limit: Duration::from_secs(1), run: golden_label },
    Criterion { id: 2, name: "cypher membership query", limit: Duration::from_secs(1), run: golden_query },
    Criterion { id: 3, name: "has-part category labels", limit: Duration::from_secs(1), run: category_labels },
    Criterion { id: 4, name: "codec round trips, 100 stores", limit: Duration::from_secs(60), run: round_trips },
    Criterion { id: 5, name: "partition invariant, 500 ops", limit: Duration::from_secs(30), run: partition_fuzz },
    Criterion { id: 6, name: "versioning replay", limit: Duration::from_secs(1), run: versioning_replay },
    Criterion { id: 7, name: "query oracle, 200 questions", limit: Duration::from_secs(60), run: query_oracle },
    Criterion { id: 8, name: "spec validation corpus", limit: Duration::from_secs(5), run: spec_validation },
    Criterion { id: 9, name: "travel OWL properties", limit: Duration::from_secs(1), run: owl_travel },
    Criterion { id: 10, name: "part-item loop and granularity tree", limit: Duration::from_secs(1), run: loop_partonomy },
    Criterion { id: 11, name: "cascade atomicity", limit: Duration::from_secs(1), run: cascade_atomicity },
];

fn main() {
    let only: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| only.is_none_or(|o| o == c.id)) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > c.limit => Err(format!("over time limit: {d}")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} {:>2} {:<38} {:>9.3}s / {:>3}s  {detail}", c.id, c.name, took.as_secs_f64(), c.limit.as_secs());
        failed += outcome.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
