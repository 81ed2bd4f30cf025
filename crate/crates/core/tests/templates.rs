use kgbb_core::engine::Ids;
use kgbb_core::fixtures::{demo_engine, demo_user};
use kgbb_core::spec::{derive_owl_access_template, AccessFormat};
use kgbb_core::templates::*;
use kgbb_core::*;

fn u(s: &str) -> Upri {
    Upri::new(s).unwrap()
}

fn ids() -> Ids {
    Ids::seeded(99, "2025-01-01T00:00:00Z".parse().unwrap())
}

#[test]
fn golden_statement_labels() {
    let (e, d) = demo_engine().unwrap();
    let (s, sp) = (e.store(), e.spec());
    assert_eq!(render_dynamic_label(s, sp, &d.travel).unwrap(), "Anna travels by train from Berlin to Rome on the 5th of August 2019");
    assert_eq!(render_dynamic_label(s, sp, &d.weight).unwrap(), "weight (95% conf. interval): 5 (4.54-5.55) kilogram");
    let want = [
        "This hand has part this thumb",
        "A hand can have part some thumb",
        "A hand typically has part some thumb",
        "Every hand necessarily has part some thumb",
    ];
    for (unit, w) in d.has_part.iter().zip(want) {
        assert_eq!(render_category_label(s, sp, unit).unwrap(), w);
    }
    assert_eq!(render_category_label(s, sp, &d.negated).unwrap(), "Head x has no antenna");
}

#[test]
fn travel_mind_map_has_hub_and_spokes() {
    let (e, d) = demo_engine().unwrap();
    let m = render_mind_map(e.store(), e.spec(), &d.travel).unwrap();
    assert_eq!(m.nodes.iter().filter(|n| n.kind == NodeKind::Hub).count(), 1);
    assert_eq!(m.nodes.len(), 6);
    assert_eq!(m.edges.len(), 5);
    assert!(m.edges.iter().any(|x| x.source == u("ex:anna") && x.target == d.travel));
}

#[test]
fn single_position_mind_map_is_one_edge() {
    let (e, d) = demo_engine().unwrap();
    let m = render_mind_map(e.store(), e.spec(), &d.has_part[0]).unwrap();
    assert_eq!(m.nodes.len(), 2);
    assert_eq!(m.edges.len(), 1);
    assert_eq!(m.edges[0].label, "has part");
}

#[test]
fn compound_mind_map_merges_members() {
    let (e, d) = demo_engine().unwrap();
    let m = render_mind_map(e.store(), e.spec(), &d.measurement_item).unwrap();
    let ids = m.node_ids();
    assert!(ids.contains(&u("ex:apple-1")));
    assert!(ids.contains(&u("ex:weight-1")));
    assert_eq!(m.node_ids().len(), m.nodes.len());
}

#[test]
fn csv_and_json_access() {
    let (e, d) = demo_engine().unwrap();
    let class = e.spec().statement_class(&u("demo:travel")).unwrap();
    let t = find_access_template(class, "travel:csv").unwrap();
    let AccessOutput::Csv(csv) = apply_access_template(e.store(), e.spec(), std::slice::from_ref(&d.travel), t, &mut ids()).unwrap() else {
        panic!("expected csv")
    };
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "person,transportation,departure,destination,datetime");
    assert_eq!(lines[1], "ex:anna,ex:train-1,ex:berlin,ex:rome,2019-08-05T00:00:00Z");
    let t = find_access_template(class, "travel:json").unwrap();
    let AccessOutput::Json(j) = apply_access_template(e.store(), e.spec(), std::slice::from_ref(&d.travel), t, &mut ids()).unwrap() else {
        panic!("expected json")
    };
    assert_eq!(j[0]["@id"], d.travel.as_str());
    assert_eq!(j[0]["destination"], "ex:rome");
    assert_eq!(j[0]["datetime"]["value"], "2019-08-05T00:00:00Z");
}

#[test]
fn owl_pattern_access_yields_property_triples() {
    let (e, d) = demo_engine().unwrap();
    let class = e.spec().statement_class(&u("demo:travel")).unwrap();
    let t = find_access_template(class, "owl").unwrap();
    let AccessOutput::Triples(ts) = apply_access_template(e.store(), e.spec(), std::slice::from_ref(&d.travel), t, &mut ids()).unwrap() else {
        panic!("expected triples")
    };
    assert_eq!(ts.len(), 4);
    assert!(ts.iter().all(|t| t.subject == u("ex:anna")));
    assert!(ts.iter().any(|t| t.predicate == u("travel:travelsTo") && t.object == Term::Iri(u("ex:rome"))));
}

#[test]
fn process_pattern_mints_fresh_nodes() {
    let (e, d) = demo_engine().unwrap();
    let class = e.spec().statement_class(&u("demo:travel")).unwrap();
    let t = find_access_template(class, "process").unwrap();
    let mut ids = ids();
    let run = |ids: &mut Ids| match apply_access_template(e.store(), e.spec(), std::slice::from_ref(&d.travel), t, ids).unwrap() {
        AccessOutput::Triples(ts) => ts,
        _ => panic!("expected triples"),
    };
    let a = run(&mut ids);
    let b = run(&mut ids);
    assert_eq!(a.len(), 6);
    let typed = |ts: &[Triple]| ts.iter().find(|t| t.object == Term::Iri(u("ex:TravelProcess"))).unwrap().subject.clone();
    assert_ne!(typed(&a), typed(&b));
    assert!(a.iter().any(|t| t.predicate == u("RO:0000057") && t.object == Term::Iri(u("ex:anna"))));
}

#[test]
fn derived_owl_template_covers_every_position() {
    let (e, d) = demo_engine().unwrap();
    let class = e.spec().statement_class(&u("demo:travel")).unwrap();
    let t = derive_owl_access_template(class).unwrap();
    assert_eq!(t.format, AccessFormat::Owl);
    let AccessOutput::Triples(ts) = apply_access_template(e.store(), e.spec(), std::slice::from_ref(&d.travel), &t, &mut ids()).unwrap() else {
        panic!("expected triples")
    };
    assert_eq!(ts.len(), 4);
}

#[test]
fn access_template_must_cover_required_positions() {
    let (e, d) = demo_engine().unwrap();
    let class = e.spec().statement_class(&u("demo:travel")).unwrap();
    let mut t = find_access_template(class, "travel:csv").unwrap().clone();
    t.mapping.retain(|(c, _)| c != "destination");
    let err = apply_access_template(e.store(), e.spec(), std::slice::from_ref(&d.travel), &t, &mut ids()).unwrap_err();
    assert!(matches!(err, TemplateError::UnmappedRequiredPosition { .. }));
}

const IMPORT: &str = "person,transportation,departure,destination,datetime
Bert,car,Hamburg,Munich,2020-01-02T10:00:00Z
Bert,bike,Munich,Hamburg,2020-02-03T10:00:00Z
Carla,car,Hamburg,Paris,not-a-date
";

#[test]
fn csv_import_creates_rows_and_reports_bad_ones() {
    let (mut e, _) = demo_engine().unwrap();
    let mut ids = ids();
    let batch = apply_import_template(
        e.store(),
        e.spec(),
        &u("demo:travel"),
        &u("travel:csv-import"),
        IMPORT,
        demo_user(),
        u("ex:import-1"),
        &mut ids,
    )
    .unwrap();
    assert_eq!(batch.requests.len(), 2);
    assert_eq!(batch.rejected.len(), 1);
    assert_eq!(batch.rejected[0].row, 3);
    assert_eq!(batch.rejected[0].column, "datetime");
    let before = e.store().resources.len();
    let mut created = Vec::new();
    for (_, req) in &batch.requests {
        created.push(e.create(req, &batch.provenance).unwrap().unit);
    }
    // Bert, car, bike, Hamburg and Munich; Bert and Hamburg are shared across rows
    assert_eq!(e.store().resources.len(), before + 5);
    let s = e.store().statement(&created[0]).unwrap();
    assert_eq!(s.meta.imported_from, Some(u("ex:import-1")));
    assert_eq!(render_dynamic_label(e.store(), e.spec(), &created[1]).unwrap(), "Bert travels by bike from Munich to Hamburg on the 3rd of February 2020, 10:00");

    let again = apply_import_template(
        e.store(),
        e.spec(),
        &u("demo:travel"),
        &u("travel:csv-import"),
        IMPORT,
        demo_user(),
        u("ex:import-2"),
        &mut ids,
    )
    .unwrap();
    for (_, req) in &again.requests {
        e.create(req, &again.provenance).unwrap();
    }
    assert_eq!(e.store().resources.len(), before + 5);
}

#[test]
fn import_requires_declared_columns() {
    let (e, _) = demo_engine().unwrap();
    let err = apply_import_template(
        e.store(),
        e.spec(),
        &u("demo:travel"),
        &u("travel:csv-import"),
        "person,departure\nBert,Hamburg\n",
        demo_user(),
        u("ex:import-1"),
        &mut ids(),
    )
    .unwrap_err();
    assert!(matches!(err, TemplateError::MissingColumn(c) if c == "transportation"));
}

#[test]
fn display_template_groups_members() {
    let (e, d) = demo_engine().unwrap();
    let doc = render_compound_display(e.store(), e.spec(), &d.person_item, None).unwrap();
    assert_eq!(doc.template, Some(u("demo:person-display")));
    let RenderedSection::Header { text } = &doc.sections[0] else { panic!("header first") };
    assert_eq!(text, "Profile of Anna");
    let RenderedSection::Association { title, units, .. } = &doc.sections[1] else { panic!("association") };
    assert_eq!(title, "Email");
    assert_eq!(units.len(), 1);
}

#[test]
fn list_without_template_gets_default_layout() {
    let (e, d) = demo_engine().unwrap();
    let doc = render_compound_display(e.store(), e.spec(), &d.travel_list, None).unwrap();
    assert_eq!(doc.template, None);
    assert!(matches!(doc.sections.first(), Some(RenderedSection::Header { .. })));
    assert!(render_compound_display(e.store(), e.spec(), &d.travel, None).is_err());
}
