//! Specifications bundled with the crate: the demo application, a minimal weight
//! measurement application, and deliberately broken specifications for the validator.

use std::sync::Arc;

use crate::engine::{CreateRequest, Engine, EngineError, Provenance, ResourceRef};
use crate::model::{ContingentChoice, Datatype, Literal, ResourceKind, Upri};
use crate::spec::{DiagnosticCode, Spec};

pub const DEMO_SPEC: &str = include_str!("../fixtures/demo.yaml");
pub const WEIGHT_DEMO_SPEC: &str = include_str!("../fixtures/weight_demo.yaml");
/// Expected OWL properties derived from the travel statement KGBB.
pub const TRAVEL_OWL_JSON: &str = include_str!("../fixtures/travel_owl.json");

/// Each broken specification with the diagnostic it must produce.
pub const BROKEN_SPECS: &[(&str, DiagnosticCode, &str)] = &[
    ("01_parse_error", DiagnosticCode::ParseError, include_str!("../fixtures/broken/01_parse_error.yaml")),
    ("02_dangling_reference", DiagnosticCode::DanglingReference, include_str!("../fixtures/broken/02_dangling_reference.yaml")),
    ("03_taxonomy_cycle", DiagnosticCode::TaxonomyCycle, include_str!("../fixtures/broken/03_taxonomy_cycle.yaml")),
    ("04_constraint_widening", DiagnosticCode::ConstraintWidening, include_str!("../fixtures/broken/04_constraint_widening.yaml")),
    (
        "05_association_source_not_compound",
        DiagnosticCode::AssociationSourceNotCompound,
        include_str!("../fixtures/broken/05_association_source_not_compound.yaml"),
    ),
    (
        "06_link_source_not_statement",
        DiagnosticCode::LinkLinkingNotStatement,
        include_str!("../fixtures/broken/06_link_source_not_statement.yaml"),
    ),
    (
        "07_reference_target_not_statement",
        DiagnosticCode::ReferenceTargetNotStatement,
        include_str!("../fixtures/broken/07_reference_target_not_statement.yaml"),
    ),
    (
        "08_link_use_as_subject_literal",
        DiagnosticCode::LinkUseAsSubjectNotResourcePosition,
        include_str!("../fixtures/broken/08_link_use_as_subject_literal.yaml"),
    ),
    (
        "09_functional_max_count",
        DiagnosticCode::FunctionalTargetMaxCount,
        include_str!("../fixtures/broken/09_functional_max_count.yaml"),
    ),
    ("10_min_exceeds_max", DiagnosticCode::MinExceedsMax, include_str!("../fixtures/broken/10_min_exceeds_max.yaml")),
    (
        "11_undeclared_starting_point",
        DiagnosticCode::UndeclaredStartingPoint,
        include_str!("../fixtures/broken/11_undeclared_starting_point.yaml"),
    ),
    (
        "12_unmapped_required_position",
        DiagnosticCode::UnmappedRequiredPosition,
        include_str!("../fixtures/broken/12_unmapped_required_position.yaml"),
    ),
];

pub fn demo_spec() -> Spec {
    Spec::from_yaml(DEMO_SPEC).expect("bundled demo specification is valid")
}

pub fn weight_demo_spec() -> Spec {
    Spec::from_yaml(WEIGHT_DEMO_SPEC).expect("bundled weight specification is valid")
}

/// Units created by [`demo_engine`].
#[derive(Debug, Clone)]
pub struct DemoUnits {
    pub travel: Upri,
    pub person_item: Upri,
    pub measurement_item: Upri,
    pub weight: Upri,
    pub has_part: [Upri; 4],
    pub negated: Upri,
    pub organism_item: Upri,
    pub partonomy: Vec<Upri>,
    pub is_about: Upri,
    pub travel_list: Upri,
}

fn u(s: &str) -> Upri {
    Upri::new(s).expect("demo identifiers are valid")
}

fn named(id: &str, class: &str, label: &str) -> ResourceRef {
    ResourceRef::with_id(u(id), ResourceKind::NamedIndividual, u(class), label)
}

fn lit(v: &str, d: Datatype) -> Literal {
    Literal::new(v, d).expect("demo literals are valid")
}

pub fn demo_user() -> Provenance {
    Provenance::user(u("demo:alice"))
}

/// A seeded engine over the demo specification holding one example of each demo KGBB.
pub fn demo_engine() -> Result<(Engine, DemoUnits), EngineError> {
    let mut e = Engine::seeded(Arc::new(demo_spec()), 7);
    let p = demo_user();
    let travel = e
        .create(
            &CreateRequest::new(u("demo:travel"))
                .subject(named("ex:anna", "ex:Person", "Anna"))
                .input(u("travel:transportation"), named("ex:train-1", "ex:Train", "train"))
                .input(u("travel:departureLocation"), named("ex:berlin", "ex:City", "Berlin"))
                .input(u("travel:destinationLocation"), named("ex:rome", "ex:City", "Rome"))
                .input(u("travel:datetime"), lit("2019-08-05T00:00:00Z", Datatype::DateTime)),
            &p,
        )?
        .unit;
    let person_item = e
        .create(
            &CreateRequest::new(u("demo:person-item"))
                .subject(u("ex:anna"))
                .cascade(CreateRequest::new(u("demo:email")).input(u("demo:email"), lit("anna@example.org", Datatype::String))),
            &p,
        )?
        .unit;
    let measurement = e.create(
        &CreateRequest::new(u("demo:measurement-item")).subject(named("ex:apple-1", "ex:Apple", "apple")).cascade(
            CreateRequest::new(u("demo:has-quality"))
                .input(u("demo:quality"), named("ex:weight-1", "obo:PATO_0000128", "weight"))
                .cascade(
                    CreateRequest::new(u("demo:weight-measurement"))
                        .input(u("demo:value"), lit("5", Datatype::Decimal))
                        .input(u("demo:lowerBound"), lit("4.54", Datatype::Decimal))
                        .input(u("demo:upperBound"), lit("5.55", Datatype::Decimal))
                        .input(u("demo:unit"), named("ex:kilogram", "ex:Kilogram", "kilogram")),
                ),
        ),
        &p,
    )?;
    let weight = measurement
        .units
        .iter()
        .find(|id| e.store().unit(id).is_some_and(|x| x.meta().kgbb_uri.as_str() == "demo:weight-measurement"))
        .cloned()
        .expect("weight measurement is created with the item");

    let part = |subject: ResourceRef, object: ResourceRef| {
        CreateRequest::new(u("demo:has-part")).subject(subject).input(u("demo:part"), object)
    };
    let some = |kind, class: &str, label: &str| ResourceRef::new(kind, u(class), label);
    let assertional = e.create(&part(named("ex:hand-1", "ex:Hand", "hand"), named("ex:thumb-1", "ex:Thumb", "thumb")), &p)?.unit;
    let contingent = e
        .create(
            &part(some(ResourceKind::SomeInstance, "ex:Hand", "hand"), some(ResourceKind::SomeInstance, "ex:Thumb", "thumb"))
                .choice(ContingentChoice::Contingent),
            &p,
        )?
        .unit;
    let prototypical = e
        .create(
            &part(some(ResourceKind::SomeInstance, "ex:Hand", "hand"), some(ResourceKind::SomeInstance, "ex:Thumb", "thumb"))
                .choice(ContingentChoice::Prototypical),
            &p,
        )?
        .unit;
    let universal = e
        .create(&part(some(ResourceKind::EveryInstance, "ex:Hand", "hand"), some(ResourceKind::SomeInstance, "ex:Thumb", "thumb")), &p)?
        .unit;
    let negated = e.create(&part(named("ex:head-x", "ex:Head", "Head x"), named("ex:antenna-1", "ex:Antenna", "antenna")).negated(), &p)?.unit;

    let organism_item = e
        .create(
            &CreateRequest::new(u("demo:material-entity-item"))
                .subject(named("ex:organism-x", "ex:Organism", "organism X"))
                .cascade(CreateRequest::new(u("demo:has-part")).input(u("demo:part"), named("ex:head-y", "ex:Head", "head Y"))),
            &p,
        )?
        .unit;
    let head_item = e
        .store()
        .units
        .values()
        .find(|x| x.meta().kgbb_uri.as_str() == "demo:material-entity-item" && x.meta().subject.as_ref() == Some(&u("ex:head-y")))
        .map(|x| x.upri().clone())
        .expect("the head item is created by the link cascade");
    e.create(
            &CreateRequest::new(u("demo:has-part")).associate_with(head_item.clone()).input(u("demo:part"), named("ex:eye-z", "ex:Eye", "eye Z")),
            &p,
        )?;
    let partonomy = e
        .store()
        .live_statements()
        .filter(|s| s.meta.kgbb_uri.as_str() == "demo:has-part" && matches!(s.subject().as_str(), "ex:organism-x" | "ex:head-y"))
        .map(|s| s.meta.upri.clone())
        .collect();
    let is_about = e
        .create(
            &CreateRequest::new(u("demo:is-about"))
                .subject(named("ex:paper-1", "ex:Publication", "field report"))
                .input(u("demo:aboutObject"), u("ex:organism-x")),
            &p,
        )?
        .unit;
    let travel_list = e.create(&CreateRequest::new(u("demo:travel-list")), &p)?.unit;
    e.create(
        &CreateRequest::new(u("demo:travel"))
            .associate_with(travel_list.clone())
            .subject(u("ex:anna"))
            .input(u("travel:destinationLocation"), u("ex:berlin")),
        &p,
    )?;
    Ok((
        e,
        DemoUnits {
            travel,
            person_item,
            measurement_item: measurement.unit,
            weight,
            has_part: [assertional, contingent, prototypical, universal],
            negated,
            organism_item,
            partonomy,
            is_about,
            travel_list,
        },
    ))
}
