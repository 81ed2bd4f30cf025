use std::collections::BTreeSet;
use std::sync::Arc;

use kgbb_core::engine::*;
use kgbb_core::fixtures::{demo_engine, demo_spec, demo_user};
use kgbb_core::query::QuestionDraft;
use kgbb_core::*;

fn u(s: &str) -> Upri {
    Upri::new(s).unwrap()
}

fn dec(v: &str) -> Literal {
    Literal::new(v, Datatype::Decimal).unwrap()
}

fn engine() -> Engine {
    Engine::seeded(Arc::new(demo_spec()), 1)
}

fn named(id: &str, class: &str, label: &str) -> ResourceRef {
    ResourceRef::with_id(u(id), ResourceKind::NamedIndividual, u(class), label)
}

fn weight_item(value: &str) -> CreateRequest {
    CreateRequest::new(u("demo:measurement-item")).subject(named("ex:apple-1", "ex:Apple", "apple")).cascade(
        CreateRequest::new(u("demo:has-quality")).input(u("demo:quality"), named("ex:weight-1", "obo:PATO_0000128", "weight")).cascade(
            CreateRequest::new(u("demo:weight-measurement"))
                .input(u("demo:value"), dec(value))
                .input(u("demo:unit"), named("ex:kilogram", "ex:Kilogram", "kilogram")),
        ),
    )
}

fn kgbb_units<'a>(e: &'a Engine, kgbb: &str) -> Vec<&'a SemanticUnit> {
    e.store().units.values().filter(|x| x.meta().kgbb_uri.as_str() == kgbb).collect()
}

#[test]
fn statement_meta_is_stamped() {
    let (e, d) = demo_engine().unwrap();
    let s = e.store().statement(&d.travel).unwrap();
    assert_eq!(s.meta.creator, u("demo:alice"));
    assert_eq!(s.meta.kgbb_uri, u("demo:travel"));
    assert!(s.meta.types.contains(&u("travel:TravelsStatementUnit")));
    assert!(s.meta.types.contains(&Upri::from_static(vocab::ASSERTIONAL_STATEMENT_UNIT)));
    assert_eq!(s.category, Category::Assertional);
    assert_eq!(s.based_on_graph_pattern, Some(u("travel:TravelsStatementKGBB")));
    assert_eq!(s.license, Some(u("cc:BY-4.0")));
    assert_eq!(s.positions.len(), 4);
    assert!(s.positions.values().all(|p| p.current_version));
}

#[test]
fn new_resources_get_identification_units() {
    let (e, _) = demo_engine().unwrap();
    let ident: Vec<&SemanticUnit> = kgbb_units(&e, vocab::TYPE_IDENTIFICATION);
    let anna = ident.iter().find(|x| x.meta().subject == Some(u("ex:anna"))).expect("Anna is identified");
    let s = anna.as_statement().unwrap();
    let inputs: BTreeSet<String> = s.current_positions().map(|p| format!("{:?}", p.input)).collect();
    assert_eq!(inputs.len(), 2);
    assert!(!kgbb_units(&e, vocab::SOME_INSTANCE_IDENTIFICATION).is_empty());
    assert!(!kgbb_units(&e, vocab::EVERY_INSTANCE_IDENTIFICATION).is_empty());
}

#[test]
fn measurement_item_with_exactly_one_quality() {
    let mut e = engine();
    let c = e.create(&weight_item("5"), &demo_user()).unwrap();
    let item = e.store().unit(&c.unit).unwrap().as_compound().unwrap();
    assert_eq!(item.associated.len(), 1);
    let quality = e.store().statement(item.associated.iter().next().unwrap()).unwrap();
    assert_eq!(quality.subject(), &u("ex:apple-1"));
    assert_eq!(quality.object_described_by.len(), 1);
    let weight = e.store().statement(quality.object_described_by.iter().next().unwrap()).unwrap();
    assert_eq!(weight.subject(), &u("ex:weight-1"));
}

#[test]
fn measurement_item_without_quality_underflows() {
    let mut e = engine();
    let before = e.store().clone();
    let err = e
        .create(&CreateRequest::new(u("demo:measurement-item")).subject(named("ex:apple-1", "ex:Apple", "apple")), &demo_user())
        .unwrap_err();
    assert!(matches!(err, EngineError::CascadeUnderflow { min: 1, got: 0, .. }), "{err:?}");
    assert_eq!(e.store(), &before);
}

#[test]
fn link_fires_only_for_matching_object() {
    let mut e = engine();
    let req = CreateRequest::new(u("demo:measurement-item")).subject(named("ex:apple-1", "ex:Apple", "apple")).cascade(
        CreateRequest::new(u("demo:has-quality")).input(u("demo:quality"), ResourceRef::new(ResourceKind::NamedIndividual, u("bfo:Quality"), "colour")),
    );
    e.create(&req, &demo_user()).unwrap();
    assert!(kgbb_units(&e, "demo:weight-measurement").is_empty());
    let err = e.create(
        &CreateRequest::new(u("demo:measurement-item")).subject(named("ex:apple-2", "ex:Apple", "apple")).cascade(
            CreateRequest::new(u("demo:has-quality")).input(u("demo:quality"), named("ex:weight-2", "obo:PATO_0000128", "weight")),
        ),
        &demo_user(),
    );
    assert!(matches!(err, Err(EngineError::CascadeUnderflow { .. })));
}

#[test]
fn assertional_statement_rejects_some_instance_object() {
    let mut e = engine();
    let err = e
        .create(
            &CreateRequest::new(u("demo:has-part"))
                .subject(named("ex:hand-1", "ex:Hand", "hand"))
                .input(u("demo:part"), ResourceRef::new(ResourceKind::SomeInstance, u("ex:Thumb"), "thumb")),
            &demo_user(),
        )
        .unwrap_err();
    assert!(matches!(err, EngineError::CategoryObjectMismatch { category: Category::Assertional, kind: ResourceKind::SomeInstance, .. }));
}

#[test]
fn constraint_violations_name_the_position() {
    let mut e = engine();
    let err = e
        .create(
            &CreateRequest::new(u("demo:travel"))
                .subject(named("ex:anna", "ex:Person", "Anna"))
                .input(u("travel:destinationLocation"), named("ex:train-1", "ex:Train", "train")),
            &demo_user(),
        )
        .unwrap_err();
    match err {
        EngineError::ConstraintViolation { slot, .. } => assert_eq!(slot, "travel:destinationLocation"),
        other => panic!("{other:?}"),
    }
    let err = e.create(&weight_item("-1"), &demo_user()).unwrap_err();
    assert!(matches!(err, EngineError::ConstraintViolation { ref slot, .. } if slot == "demo:value"), "{err:?}");
    let err = e
        .create(&CreateRequest::new(u("demo:travel")).subject(named("ex:anna", "ex:Person", "Anna")), &demo_user())
        .unwrap_err();
    assert!(matches!(err, EngineError::MissingRequiredPosition { .. }));
}

#[test]
fn unreachable_or_unknown_kgbbs_are_refused() {
    let mut e = engine();
    let err = e.create(&CreateRequest::new(u("demo:weight-measurement")), &demo_user()).unwrap_err();
    assert_eq!(err, EngineError::NotReachable(u("demo:weight-measurement")));
    let err = e.create(&CreateRequest::new(u("demo:nothing")), &demo_user()).unwrap_err();
    assert_eq!(err, EngineError::UnknownKgbb(u("demo:nothing")));
}

#[test]
fn max_count_counts_live_members_only() {
    let (mut e, d) = demo_engine().unwrap();
    let email = |addr: &str| {
        CreateRequest::new(u("demo:email"))
            .associate_with(d.person_item.clone())
            .input(u("demo:email"), Literal::string(addr))
    };
    let err = e.create(&email("second@example.org"), &demo_user()).unwrap_err();
    assert!(matches!(err, EngineError::MaxCountExceeded { max: 1, .. }));
    let existing = e.store().unit(&d.person_item).unwrap().as_compound().unwrap().associated.iter().next().cloned().unwrap();
    e.soft_delete(&existing, &demo_user(), false).unwrap();
    e.create(&email("second@example.org"), &demo_user()).unwrap();
}

#[test]
fn part_loop_creates_and_links_part_items() {
    let (e, d) = demo_engine().unwrap();
    let store = e.store();
    let items = kgbb_units(&e, "demo:material-entity-item");
    for s in store.live_statements().filter(|s| s.meta.kgbb_uri.as_str() == "demo:has-part" && !s.negated) {
        let part = s.current(&u("demo:part")).unwrap().input.as_resource().unwrap();
        let linked: Vec<&SemanticUnit> = s.object_described_by.iter().map(|id| store.unit(id).unwrap()).collect();
        assert_eq!(linked.len(), 1, "{}", s.meta.upri);
        assert_eq!(linked[0].meta().subject.as_ref(), Some(part));
        for parent in items.iter().filter_map(|i| i.as_compound()).filter(|c| c.associated.contains(&s.meta.upri)) {
            assert!(parent.linked.contains(linked[0].upri()));
        }
    }
    let organism = store.unit(&d.organism_item).unwrap().as_compound().unwrap();
    assert_eq!(organism.linked.len(), 1);
}

#[test]
fn loop_reuses_existing_item_for_the_same_part() {
    let (mut e, _) = demo_engine().unwrap();
    let before = kgbb_units(&e, "demo:material-entity-item").len();
    e.create(
        &CreateRequest::new(u("demo:has-part")).subject(named("ex:hand-2", "ex:Hand", "hand")).input(u("demo:part"), u("ex:thumb-1")),
        &demo_user(),
    )
    .unwrap();
    assert_eq!(kgbb_units(&e, "demo:material-entity-item").len(), before);
}

#[test]
fn granularity_tree_is_rooted_at_the_organism() {
    let (e, d) = demo_engine().unwrap();
    let trees = derive_granularity_trees(e.store(), e.spec(), Some(&u("demo:has-part"))).unwrap();
    let tree = trees.iter().find(|t| t.root == u("ex:organism-x")).expect("tree rooted at organism X");
    assert_eq!(tree.nodes, BTreeSet::from([u("ex:organism-x"), u("ex:head-y"), u("ex:eye-z")]));
    assert_eq!(tree.units, d.partonomy.iter().cloned().collect());
    let members = derive_compound(e.store(), e.spec(), &u("ex:head-y"), CompoundKind::GranularityTree).unwrap();
    assert_eq!(members, tree.units);
    let err = derive_granularity_trees(e.store(), e.spec(), Some(&u("demo:travel"))).unwrap_err();
    assert!(matches!(err, DeriveError::NotPartialOrder(..)));
}

#[test]
fn cyclic_part_relation_is_not_a_partial_order() {
    let mut e = engine();
    let p = demo_user();
    let hp = |s: ResourceRef, o: ResourceRef| CreateRequest::new(u("demo:has-part")).subject(s).input(u("demo:part"), o);
    e.create(&hp(named("ex:a", "ex:Hand", "a"), named("ex:b", "ex:Thumb", "b")), &p).unwrap();
    e.create(&hp(u("ex:b").into(), u("ex:a").into()), &p).unwrap();
    assert!(matches!(derive_granularity_trees(e.store(), e.spec(), None), Err(DeriveError::NotPartialOrder(..))));
}

#[test]
fn items_and_contexts() {
    let (e, d) = demo_engine().unwrap();
    let item = derive_item(e.store(), &u("ex:anna"));
    assert!(item.units.contains(&d.travel));
    let contexts = derive_contexts(e.store(), e.spec());
    let about = contexts.iter().find(|c| c.units.contains(&d.is_about)).unwrap();
    assert!(about.resources.contains(&u("ex:paper-1")));
    assert!(!about.resources.contains(&u("ex:organism-x")));
    let organism = contexts.iter().find(|c| c.resources.contains(&u("ex:organism-x"))).unwrap();
    assert!(organism.units.is_superset(&d.partonomy.iter().cloned().collect()));
}

#[test]
fn one_is_about_statement_splits_two_contexts() {
    let mut e = engine();
    let p = demo_user();
    e.create(
        &CreateRequest::new(u("demo:has-part")).subject(named("ex:o", "ex:Organism", "o")).input(u("demo:part"), named("ex:h", "ex:Head", "h")),
        &p,
    )
    .unwrap();
    e.create(
        &CreateRequest::new(u("demo:is-about")).subject(named("ex:doc", "ex:Publication", "doc")).input(u("demo:aboutObject"), u("ex:o")),
        &p,
    )
    .unwrap();
    let contexts = derive_contexts(e.store(), e.spec());
    assert_eq!(contexts.len(), 2, "{contexts:#?}");
}

#[test]
fn updates_append_instances() {
    let mut e = engine();
    let c = e.create(&weight_item("5.0"), &demo_user()).unwrap();
    let weight = c.units.iter().find(|x| e.store().unit(x).unwrap().meta().kgbb_uri.as_str() == "demo:weight-measurement").unwrap().clone();
    for v in ["5.1", "5.1", "5.2"] {
        e.update_position(&weight, &u("demo:value"), &dec(v).into(), &Provenance::user(u("demo:bob"))).unwrap();
    }
    let s = e.store().statement(&weight).unwrap();
    let mut values: Vec<&ObjectPositionInstance> = s.positions.values().filter(|p| p.position_class == u("demo:value")).collect();
    values.sort_by_key(|p| p.creation_date);
    assert_eq!(values.len(), 4);
    assert_eq!(values.iter().filter(|p| p.current_version).count(), 1);
    assert!(values.windows(2).all(|w| w[0].creation_date < w[1].creation_date));
    assert_eq!(values[3].input, ObjectInput::Literal(dec("5.2")));
    assert_eq!(s.meta.curator, Some(u("demo:bob")));
}

#[test]
fn locked_units_reject_edits() {
    let (mut e, d) = demo_engine().unwrap();
    e.set_editable(&d.travel, false, &demo_user()).unwrap();
    let err = e.update_position(&d.travel, &u("travel:destinationLocation"), &u("ex:berlin").into(), &demo_user()).unwrap_err();
    assert_eq!(err, EngineError::UnitLocked(d.travel.clone()));
}

#[test]
fn soft_delete_keeps_metadata() {
    let (mut e, d) = demo_engine().unwrap();
    e.soft_delete(&d.travel, &Provenance::user(u("demo:bob")), false).unwrap();
    assert_eq!(e.read(&d.travel, None).unwrap_err(), EngineError::UnitDeleted(d.travel.clone()));
    let m = e.read_including_deleted(&d.travel).unwrap();
    assert_eq!(m.meta.deleted_by, Some(u("demo:bob")));
    assert_eq!(m.positions.len(), 4);
    assert_eq!(e.soft_delete(&d.travel, &demo_user(), false).unwrap_err(), EngineError::AlreadyDeleted(d.travel.clone()));
}

#[test]
fn cascading_delete_removes_unshared_members() {
    let (mut e, d) = demo_engine().unwrap();
    let deleted = e.soft_delete(&d.measurement_item, &demo_user(), true).unwrap();
    assert_eq!(deleted.len(), 2);
}

#[test]
fn versions_chain_and_replay() {
    let mut e = engine();
    let p = demo_user();
    let c = e.create(&weight_item("5.0"), &p).unwrap();
    let weight = c.units.iter().find(|x| e.store().unit(x).unwrap().meta().kgbb_uri.as_str() == "demo:weight-measurement").unwrap().clone();
    let v1 = e.create_version(&weight, &p).unwrap();
    let snapshot = e.read(&weight, Some(&v1)).unwrap();
    e.update_position(&weight, &u("demo:value"), &dec("5.1").into(), &p).unwrap();
    let v2 = e.create_version(&weight, &p).unwrap();
    let chain = e.history(&weight).unwrap();
    assert_eq!(chain.iter().map(|v| &v.upri).collect::<Vec<_>>(), [&v1, &v2]);
    assert_eq!(chain[1].previous, Some(v1.clone()));
    assert_eq!(chain[0].previous, None);
    let s = e.store().statement(&weight).unwrap();
    let value_ids: Vec<&BTreeSet<Upri>> = s.positions.values().filter(|p| p.position_class == u("demo:value")).map(|p| &p.version_ids).collect();
    assert!(value_ids.contains(&&BTreeSet::from([v1.clone()])));
    assert!(value_ids.contains(&&BTreeSet::from([v2.clone()])));
    assert_eq!(s.current(&u("demo:unit")).unwrap().version_ids, BTreeSet::from([v1.clone(), v2.clone()]));
    assert_eq!(e.read(&weight, Some(&v1)).unwrap(), snapshot);
    e.soft_delete(&weight, &p, false).unwrap();
    assert_eq!(e.read(&weight, Some(&v1)).unwrap(), snapshot);
    assert!(matches!(e.read(&weight, Some(&u("demo:nope"))), Err(EngineError::UnknownVersion { .. })));
}

#[test]
fn compound_versions_cover_members() {
    let (mut e, d) = demo_engine().unwrap();
    let v = e.create_version(&d.measurement_item, &demo_user()).unwrap();
    let m = e.read(&d.measurement_item, Some(&v)).unwrap();
    assert_eq!(m.members.len(), 1);
    let member = e.read(&m.members[0], Some(&v)).unwrap();
    assert_eq!(member.positions.len(), 1);
}

#[test]
fn aggregation_collects_contributors_and_licences() {
    let (mut e, d) = demo_engine().unwrap();
    let quality = e.store().unit(&d.measurement_item).unwrap().as_compound().unwrap().associated.iter().next().cloned().unwrap();
    let q = e.store().statement(&quality).unwrap().clone();
    let agg = e.aggregate(&d.measurement_item).unwrap();
    assert_eq!(agg.contributors, BTreeSet::from([u("demo:alice")]));
    assert_eq!(agg.copyright_license, Some(u("cc:BY-4.0")));
    e.update_position(&quality, &u("demo:quality"), &q.current(&u("demo:quality")).unwrap().input.as_resource().unwrap().clone().into(), &Provenance::user(u("demo:bob")))
        .unwrap();
    let agg = e.aggregate(&d.measurement_item).unwrap();
    assert_eq!(agg.contributors, BTreeSet::from([u("demo:alice"), u("demo:bob")]));
}

#[test]
fn licence_order_picks_most_restrictive() {
    let order = LicenseOrder::new(&[[u("cc:CC0-1.0"), u("cc:BY-4.0")], [u("cc:BY-4.0"), u("cc:BY-SA-4.0")], [u("cc:BY-4.0"), u("cc:BY-NC-4.0")]]);
    assert_eq!(order.most_restrictive(&[u("cc:CC0-1.0"), u("cc:BY-4.0")]).unwrap(), Some(u("cc:BY-4.0")));
    assert_eq!(order.most_restrictive(&[u("cc:CC0-1.0"), u("cc:BY-SA-4.0")]).unwrap(), Some(u("cc:BY-SA-4.0")));
    assert!(matches!(
        order.most_restrictive(&[u("cc:BY-SA-4.0"), u("cc:BY-NC-4.0")]),
        Err(EngineError::IncomparableLicenses(..))
    ));
}

#[test]
fn failed_cascade_leaves_store_unchanged() {
    let (mut e, _) = demo_engine().unwrap();
    let before = serde_json::to_string(e.store()).unwrap();
    let req = CreateRequest::new(u("demo:material-entity-item"))
        .subject(named("ex:organism-q", "ex:Organism", "organism Q"))
        .cascade(CreateRequest::new(u("demo:has-part")).input(u("demo:part"), named("ex:head-q", "ex:Head", "head Q")))
        .cascade(CreateRequest::new(u("demo:has-part")).input(u("demo:part"), named("ex:tail-q", "ex:Location", "tail")));
    assert!(e.create(&req, &demo_user()).is_err());
    assert_eq!(serde_json::to_string(e.store()).unwrap(), before);
}

#[test]
fn carry_over_constraint_nodes_are_recorded() {
    let (e, d) = demo_engine().unwrap();
    let organism = e.store().unit(&d.organism_item).unwrap().as_compound().unwrap();
    let hp = e.store().statement(organism.associated.iter().next().unwrap()).unwrap();
    let node = hp.constraint_nodes.iter().next().unwrap();
    assert_eq!(node.applies_to_object_position, u("demo:part"));
    assert_eq!(node.range_class(), Some(u("bfo:MaterialEntity")));
}

#[test]
fn negated_statements_do_not_cascade() {
    let (e, d) = demo_engine().unwrap();
    assert!(e.store().statement(&d.negated).unwrap().object_described_by.is_empty());
}

#[test]
fn questions_are_stored_units() {
    let (mut e, _) = demo_engine().unwrap();
    let draft = QuestionDraft { kgbb: u("demo:travel"), subject: Some(Binding::Exact(u("ex:anna"))), bindings: Default::default() };
    let q = e.save_question(&draft, &demo_user()).unwrap();
    let unit = e.store().unit(&q).unwrap().as_question().unwrap();
    assert_eq!(unit.mode, AnswerMode::Boolean);
    assert!(e.answer(&q).unwrap().holds);
}
