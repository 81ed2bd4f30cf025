use std::collections::BTreeSet;

use kgbb_core::backends::*;
use kgbb_core::fixtures::{demo_engine, demo_user};
use kgbb_core::*;

fn demo_store() -> Store {
    let (mut e, d) = demo_engine().unwrap();
    let p = demo_user();
    e.create_version(&d.travel, &p).unwrap();
    e.update_position(&d.travel, &Upri::new("travel:destinationLocation").unwrap(), &Upri::new("ex:berlin").unwrap().into(), &p)
        .unwrap();
    e.create_version(&d.person_item, &p).unwrap();
    e.soft_delete(&d.negated, &p, false).unwrap();
    e.into_store()
}

#[test]
fn empty_store_round_trips() {
    let s = Store::default();
    let trig = export_rdf(&s);
    assert!(trig.lines().all(|l| l.starts_with("@prefix")));
    assert_eq!(import_rdf(&trig).unwrap(), s);
    assert_eq!(import_pg(&export_pg(&s)).unwrap(), s);
    assert_eq!(import_tables(&export_tables(&s)).unwrap(), s);
}

#[test]
fn demo_store_round_trips_through_every_codec() {
    let s = demo_store();
    assert_eq!(import_rdf(&export_rdf(&s)).unwrap(), s);
    let pg = export_pg(&s);
    let json = serde_json::to_string(&pg).unwrap();
    let back: PropertyGraphDoc = serde_json::from_str(&json).unwrap();
    assert_eq!(import_pg(&back).unwrap(), s);
    assert_eq!(import_tables(&export_tables(&s)).unwrap(), s);
}

#[test]
fn exports_are_deterministic() {
    let a = demo_store();
    let b = import_tables(&export_tables(&a)).unwrap();
    assert_eq!(export_rdf(&a), export_rdf(&b));
    assert_eq!(serde_json::to_string(&export_pg(&a)).unwrap(), serde_json::to_string(&export_pg(&b)).unwrap());
    assert_eq!(export_tables(&a), export_tables(&b));
}

#[test]
fn trig_is_valid_and_has_one_data_graph_per_statement() {
    let s = demo_store();
    let trig = export_rdf(&s);
    let quads: Vec<_> = oxttl::TriGParser::new().for_slice(&trig).collect::<Result<_, _>>().unwrap();
    let graphs: BTreeSet<String> = quads
        .iter()
        .filter_map(|q| match &q.graph_name {
            oxrdf::GraphName::NamedNode(n) => Some(n.as_str().to_string()),
            _ => None,
        })
        .collect();
    for st in s.statements() {
        assert!(graphs.contains(st.meta.upri.as_str()));
        let in_graph = quads.iter().filter(|q| matches!(&q.graph_name, oxrdf::GraphName::NamedNode(n) if n.as_str() == st.meta.upri.as_str())).count();
        assert_eq!(in_graph, st.data_graph().len());
    }
}

#[test]
fn missing_object_table_is_a_schema_mismatch() {
    let s = demo_store();
    let mut bundle = export_tables(&s);
    let entry = bundle.manifest.tables.iter().find(|t| t.role == TableRole::Object).unwrap().clone();
    bundle.files.remove(&entry.file);
    match import_tables(&bundle) {
        Err(BackendError::SchemaMismatch { record, .. }) => assert_eq!(record, entry.table),
        other => panic!("expected a schema mismatch, got {other:?}"),
    }
}

#[test]
fn tables_bundle_survives_the_filesystem() {
    let s = demo_store();
    let dir = tempfile::tempdir().unwrap();
    export_tables(&s).write_dir(dir.path()).unwrap();
    let back = SemanticTables::read_dir(dir.path()).unwrap();
    assert_eq!(import_tables(&back).unwrap(), s);
}

/// Evaluates the membership pattern directly over a property-graph document.
fn evaluate_cypher(doc: &PropertyGraphDoc, query: &str) -> BTreeSet<String> {
    let re = regex::Regex::new(r#"^MATCH \(n \{current_version:"true"\}\) WHERE \("(.*)" IN n\.(\w+)\) RETURN n$"#).unwrap();
    let c = re.captures(query).expect("membership query shape");
    let (x, prop) = (&c[1], &c[2]);
    doc.nodes
        .iter()
        .filter(|n| n.properties.get("current_version").and_then(|v| v.as_str()) == Some("true"))
        .filter(|n| n.properties.get(prop).and_then(|v| v.as_array()).is_some_and(|a| a.iter().any(|i| i.as_str() == Some(x))))
        .map(|n| n.id.clone())
        .collect()
}

#[test]
fn membership_queries_select_the_unit_nodes() {
    let (mut e, d) = demo_engine().unwrap();
    let v1 = e.create_version(&d.travel, &demo_user()).unwrap();
    let s = e.store();
    let doc = export_pg(s);
    let q = generate_membership_query(&d.travel, membership_kind(s, &d.travel).unwrap(), Dialect::Cypher);
    assert_eq!(q, format!(r#"MATCH (n {{current_version:"true"}}) WHERE ("{}" IN n.statementUnitURI) RETURN n"#, d.travel));
    let want: BTreeSet<String> = s.statement(&d.travel).unwrap().current_positions().map(|p| p.upri.to_string()).collect();
    assert_eq!(evaluate_cypher(&doc, &q), want);

    let q = generate_membership_query(&v1, membership_kind(s, &v1).unwrap(), Dialect::Cypher);
    assert!(q.contains("n.versionID"));
    let want: BTreeSet<String> = s.statement(&d.travel).unwrap().positions_at(&v1).map(|p| p.upri.to_string()).collect();
    assert_eq!(evaluate_cypher(&doc, &q), want);

    let q = generate_membership_query(&d.measurement_item, membership_kind(s, &d.measurement_item).unwrap(), Dialect::Cypher);
    assert!(q.contains("n.compoundUnitURI"));
    let mut want = BTreeSet::new();
    let item = s.unit(&d.measurement_item).unwrap().as_compound().unwrap();
    let mut queue: Vec<Upri> = item.associated.iter().cloned().collect();
    while let Some(u) = queue.pop() {
        match s.unit(&u).unwrap() {
            SemanticUnit::Statement(st) => want.extend(st.current_positions().map(|p| p.upri.to_string())),
            SemanticUnit::Compound(c) => queue.extend(c.associated.iter().cloned()),
            _ => {}
        }
    }
    assert_eq!(evaluate_cypher(&doc, &q), want);
    assert!(!want.is_empty());
}
