//! Seeded random workloads over the demo specification: stores, edit sequences and questions.
//!
//! Operations are drawn against the current store so that most of them succeed; the rest
//! exercise the engine's rejection paths.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{CreateRequest, Engine, EngineError, InputValue, Provenance, ResourceRef};
use crate::fixtures::demo_spec;
use crate::model::*;
use crate::query::QuestionDraft;
use crate::spec::{ObjectType, Spec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Op {
    Create { request: CreateRequest },
    Update { unit: Upri, position: Upri, value: InputValue },
    Clear { unit: Upri, position: Upri },
    Delete { unit: Upri, cascade: bool },
    Version { unit: Upri },
    SetEditable { unit: Upri, editable: bool },
    Question { draft: QuestionDraft },
    CompoundQuestion { tree: QuestionTree },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpStats {
    pub applied: usize,
    pub rejected: usize,
}

fn u(s: &str) -> Upri {
    Upri::new(s).expect("synthetic identifiers are valid")
}

pub struct Synth {
    rng: ChaCha8Rng,
    counter: u64,
}

impl Synth {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), counter: 0 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn next_label(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base} {}", self.counter)
    }

    pub fn user(&mut self) -> Provenance {
        Provenance::user(u(&format!("synth:user-{}", self.rng.random_range(1..=3))))
    }

    fn leaf_class(&mut self, spec: &Spec, class: &Upri) -> Upri {
        let subs: Vec<Upri> = spec.ontology.subclasses(class).into_iter().collect();
        subs.choose(&mut self.rng).cloned().unwrap_or_else(|| class.clone())
    }

    /// An existing resource of the kind whose class falls under `class`, or a new one.
    fn resource(&mut self, store: &Store, spec: &Spec, kind: ResourceKind, class: &Upri, reuse: f64) -> ResourceRef {
        if self.rng.random_bool(reuse) {
            let pool: Vec<&Resource> = store
                .resources
                .values()
                .filter(|r| r.kind == kind && r.class_affiliation.as_ref().is_some_and(|c| spec.ontology.is_subclass_of(c, class)))
                .collect();
            if let Some(r) = pool.choose(&mut self.rng) {
                return ResourceRef::Existing(r.upri.clone());
            }
        }
        let leaf = self.leaf_class(spec, class);
        let label = self.next_label(spec.ontology.label(&leaf).unwrap_or("thing"));
        ResourceRef::new(kind, leaf, &label)
    }

    fn literal(&mut self, datatype: Datatype, pattern: Option<&str>) -> Literal {
        let value = match datatype {
            Datatype::Decimal | Datatype::Float => format!("{:.2}", self.rng.random_range(0.0..100.0)),
            Datatype::Integer => self.rng.random_range(0..1000).to_string(),
            Datatype::Boolean => self.rng.random_bool(0.5).to_string(),
            Datatype::Date => format!("{}-{:02}-{:02}", self.rng.random_range(2015..2025), self.rng.random_range(1..13), self.rng.random_range(1..29)),
            Datatype::DateTime => format!(
                "{}-{:02}-{:02}T{:02}:00:00Z",
                self.rng.random_range(2015..2025),
                self.rng.random_range(1..13),
                self.rng.random_range(1..29),
                self.rng.random_range(0..24)
            ),
            Datatype::String if pattern.is_some_and(|p| p.contains('@')) => format!("{}@example.org", self.next_label("user").replace(' ', "")),
            Datatype::String => self.next_label("text"),
        };
        Literal::new(value, datatype).expect("generated literals are valid")
    }

    fn person(&mut self, store: &Store, spec: &Spec) -> ResourceRef {
        self.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:Person"), 0.7)
    }

    fn travel(&mut self, store: &Store, spec: &Spec) -> CreateRequest {
        let mut req = CreateRequest::new(u("demo:travel")).subject(self.person(store, spec));
        let city = |s: &mut Self| s.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:City"), 0.8);
        req = req.input(u("travel:destinationLocation"), city(self));
        if self.rng.random_bool(0.7) {
            req = req.input(u("travel:departureLocation"), city(self));
        }
        if self.rng.random_bool(0.7) {
            let t = self.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:Transportation"), 0.5);
            req = req.input(u("travel:transportation"), t);
        }
        if self.rng.random_bool(0.7) {
            req = req.input(u("travel:datetime"), self.literal(Datatype::DateTime, None));
        }
        req
    }

    fn has_part(&mut self, store: &Store, spec: &Spec) -> CreateRequest {
        let parts = ["ex:Hand", "ex:Thumb", "ex:Head", "ex:Eye", "ex:Organism", "ex:Antenna"];
        let whole = u(parts.choose(&mut self.rng).expect("non-empty"));
        let part = u(parts.choose(&mut self.rng).expect("non-empty"));
        let req = CreateRequest::new(u("demo:has-part"));
        match self.rng.random_range(0..5) {
            0 => req
                .subject(self.resource(store, spec, ResourceKind::SomeInstance, &whole, 0.3))
                .input(u("demo:part"), self.resource(store, spec, ResourceKind::SomeInstance, &part, 0.3))
                .choice(if self.rng.random_bool(0.5) { ContingentChoice::Contingent } else { ContingentChoice::Prototypical }),
            1 => req
                .subject(self.resource(store, spec, ResourceKind::EveryInstance, &whole, 0.3))
                .input(u("demo:part"), self.resource(store, spec, ResourceKind::SomeInstance, &part, 0.3)),
            n => {
                let req = req
                    .subject(self.resource(store, spec, ResourceKind::NamedIndividual, &whole, 0.5))
                    .input(u("demo:part"), self.resource(store, spec, ResourceKind::NamedIndividual, &part, 0.5));
                if n == 2 && self.rng.random_bool(0.3) {
                    req.negated()
                } else {
                    req
                }
            }
        }
    }

    fn measurement(&mut self, store: &Store, spec: &Spec) -> CreateRequest {
        let mut m = CreateRequest::new(u("demo:weight-measurement"))
            .input(u("demo:value"), self.literal(Datatype::Decimal, None))
            .input(u("demo:unit"), self.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:Kilogram"), 0.9));
        if self.rng.random_bool(0.5) {
            m = m
                .input(u("demo:lowerBound"), self.literal(Datatype::Decimal, None))
                .input(u("demo:upperBound"), self.literal(Datatype::Decimal, None));
        }
        let quality = self.resource(store, spec, ResourceKind::NamedIndividual, &u("obo:PATO_0000128"), 0.0);
        let subject = self.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:Apple"), 0.3);
        CreateRequest::new(u("demo:measurement-item"))
            .subject(subject)
            .cascade(CreateRequest::new(u("demo:has-quality")).input(u("demo:quality"), quality).cascade(m))
    }

    fn live_of(&mut self, store: &Store, kgbb: &str) -> Option<Upri> {
        let pool: Vec<&Upri> = store.units.values().filter(|x| !x.is_deleted() && x.meta().kgbb_uri.as_str() == kgbb).map(|x| x.upri()).collect();
        pool.choose(&mut self.rng).map(|x| (*x).clone())
    }

    /// A random creation request, possibly attached to an existing compound.
    pub fn create_request(&mut self, store: &Store, spec: &Spec) -> CreateRequest {
        match self.rng.random_range(0..100) {
            0..25 => self.travel(store, spec),
            25..45 => self.has_part(store, spec),
            45..55 => {
                let subject = self.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:Organism"), 0.3);
                let part = self.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:Head"), 0.3);
                CreateRequest::new(u("demo:material-entity-item"))
                    .subject(subject)
                    .cascade(CreateRequest::new(u("demo:has-part")).input(u("demo:part"), part))
            }
            55..65 => self.measurement(store, spec),
            65..73 => {
                let mut req = CreateRequest::new(u("demo:person-item")).subject(self.person(store, spec));
                if self.rng.random_bool(0.6) {
                    let mail = self.literal(Datatype::String, Some("@"));
                    req = req.cascade(CreateRequest::new(u("demo:email")).input(u("demo:email"), mail));
                }
                req
            }
            73..80 => {
                let about = store.resources.keys().cloned().collect::<Vec<_>>();
                let object = about.choose(&mut self.rng).cloned().map(ResourceRef::Existing).unwrap_or_else(|| self.person(store, spec));
                CreateRequest::new(u("demo:is-about"))
                    .subject(self.resource(store, spec, ResourceKind::NamedIndividual, &u("ex:Publication"), 0.4))
                    .input(u("demo:aboutObject"), object)
            }
            80..85 => {
                let subject = self.resource(store, spec, ResourceKind::NamedIndividual, &u("bfo:Entity"), 0.9);
                CreateRequest::new(u("demo:label")).subject(subject).input(u("demo:labelText"), self.literal(Datatype::String, None))
            }
            85..90 => CreateRequest::new(u("demo:travel-list")),
            90..95 => match self.live_of(store, "demo:travel-list") {
                Some(list) => self.travel(store, spec).associate_with(list),
                None => CreateRequest::new(u("demo:travel-list")),
            },
            _ => match self.live_of(store, "demo:person-item") {
                Some(item) => {
                    let subject = store.unit(&item).and_then(|x| x.meta().subject.clone()).expect("items have a subject");
                    self.travel(store, spec).subject(subject).associate_with(item)
                }
                None => self.travel(store, spec),
            },
        }
    }

    fn pick_unit(&mut self, store: &Store, statements_only: bool) -> Option<Upri> {
        let pool: Vec<&Upri> = store
            .units
            .values()
            .filter(|x| !x.is_deleted())
            .filter(|x| if statements_only { x.as_statement().is_some() } else { x.as_statement().is_some() || x.as_compound().is_some() })
            .map(|x| x.upri())
            .collect();
        pool.choose(&mut self.rng).map(|x| (*x).clone())
    }

    /// A new value shaped like the position's current one.
    fn update_for(&mut self, store: &Store, spec: &Spec, unit: &Upri) -> Option<(Upri, InputValue)> {
        let s = store.statement(unit)?;
        let class = spec.statement_class(&s.meta.kgbb_uri)?;
        let pos = class.positions.choose(&mut self.rng)?;
        let kind = s
            .current_positions()
            .filter_map(|p| p.input.as_resource())
            .find_map(|r| store.resource(r).map(|r| r.kind))
            .unwrap_or(ResourceKind::NamedIndividual);
        let value = match pos.object_type {
            ObjectType::Literal => {
                let dt = pos.constraint.datatype.unwrap_or(Datatype::String);
                InputValue::Literal(self.literal(dt, pos.constraint.pattern.as_deref()))
            }
            ObjectType::Resource => {
                let range = pos.constraint.class.clone().unwrap_or_else(|| u("bfo:Entity"));
                InputValue::Resource(self.resource(store, spec, kind, &range, 0.6))
            }
        };
        Some((pos.id.clone(), value))
    }

    /// Draws the next operation against the current store.
    pub fn next_op(&mut self, store: &Store, spec: &Spec) -> Op {
        let roll = if store.units.is_empty() { 0 } else { self.rng.random_range(0..100) };
        let fallback = |s: &mut Self| Op::Create { request: s.create_request(store, spec) };
        match roll {
            0..50 => fallback(self),
            50..70 => match self.pick_unit(store, true).and_then(|unit| self.update_for(store, spec, &unit).map(|(p, v)| (unit, p, v))) {
                Some((unit, position, value)) => Op::Update { unit, position, value },
                None => fallback(self),
            },
            70..73 => match self.pick_unit(store, true) {
                Some(unit) => {
                    let s = store.statement(&unit).expect("picked a statement");
                    let position = s.current_positions().map(|p| p.position_class.clone()).collect::<Vec<_>>().choose(&mut self.rng).cloned();
                    match position {
                        Some(position) => Op::Clear { unit, position },
                        None => fallback(self),
                    }
                }
                None => fallback(self),
            },
            73..82 => match self.pick_unit(store, false) {
                Some(unit) => Op::Delete { unit, cascade: self.rng.random_bool(0.3) },
                None => fallback(self),
            },
            82..92 => match self.pick_unit(store, false) {
                Some(unit) => Op::Version { unit },
                None => fallback(self),
            },
            92..95 => match self.pick_unit(store, false) {
                Some(unit) => Op::SetEditable { unit, editable: self.rng.random_bool(0.5) },
                None => fallback(self),
            },
            95..98 => match self.question(store, spec) {
                Some(draft) => Op::Question { draft },
                None => fallback(self),
            },
            _ => match self.question_tree(store, 2) {
                Some(tree) => Op::CompoundQuestion { tree },
                None => fallback(self),
            },
        }
    }

    fn ancestor(&mut self, spec: &Spec, class: &Upri) -> Upri {
        let ups: Vec<Upri> = spec.ontology.classes().map(|c| c.id.clone()).filter(|c| spec.ontology.is_subclass_of(class, c)).collect();
        ups.choose(&mut self.rng).cloned().unwrap_or_else(|| class.clone())
    }

    fn resource_binding(&mut self, store: &Store, spec: &Spec, r: &Upri) -> Binding {
        let class = store.resource(r).and_then(|x| x.class_affiliation.clone());
        match (class, self.rng.random_range(0..4)) {
            (Some(c), 1) => Binding::SomeInstanceOf(self.ancestor(spec, &c)),
            (Some(c), 2) => Binding::Class(self.ancestor(spec, &c)),
            (Some(c), 3) => Binding::EveryInstanceOf(self.ancestor(spec, &c)),
            _ => Binding::Exact(r.clone()),
        }
    }

    fn literal_binding(&mut self, l: &Literal) -> LiteralSpec {
        let mut spec = LiteralSpec::default();
        match self.rng.random_range(0..4) {
            0 => spec.exact = Some(l.clone()),
            1 if l.datatype().is_temporal() => spec.year = l.year(),
            1 | 2 if l.datatype().is_numeric() => {
                let v = l.as_f64().unwrap_or(0.0);
                spec.min = Literal::new(format!("{:.2}", (v - self.rng.random_range(0.0..20.0)).max(0.0)), Datatype::Decimal).ok();
                spec.max = Literal::new(format!("{:.2}", v + self.rng.random_range(0.0..20.0)), Datatype::Decimal).ok();
            }
            2 if l.datatype().is_temporal() => {
                spec.min = Literal::new(format!("{}-01-01T00:00:00Z", l.year().unwrap_or(2020) - 1), Datatype::DateTime).ok();
            }
            _ => spec.datatype = Some(l.datatype()),
        }
        spec
    }

    /// A random AND/OR tree over stored questions.
    pub fn question_tree(&mut self, store: &Store, depth: usize) -> Option<QuestionTree> {
        let leaves: Vec<&Upri> = store.units.values().filter(|x| x.as_question().is_some()).map(|x| x.upri()).collect();
        if leaves.is_empty() {
            return None;
        }
        if depth == 0 || self.rng.random_bool(0.3) {
            return Some(QuestionTree::Question((*leaves.choose(&mut self.rng)?).clone()));
        }
        let n = self.rng.random_range(2..=3);
        let children = (0..n).map(|_| self.question_tree(store, depth - 1)).collect::<Option<Vec<_>>>()?;
        Some(if self.rng.random_bool(0.5) { QuestionTree::And(children) } else { QuestionTree::Or(children) })
    }

    /// A question modelled on a random live statement, with some bindings loosened or perturbed.
    pub fn question(&mut self, store: &Store, spec: &Spec) -> Option<QuestionDraft> {
        let pool: Vec<&StatementUnit> = store
            .statements()
            .filter(|s| !s.meta.kgbb_uri.as_str().starts_with(vocab::KGBB_NS) && spec.statement_class(&s.meta.kgbb_uri).is_some())
            .collect();
        let seed = *pool.choose(&mut self.rng)?;
        let class = spec.statement_class(&seed.meta.kgbb_uri)?;
        let subject = match self.rng.random_range(0..5) {
            0 => None,
            _ => Some(self.resource_binding(store, spec, seed.subject())),
        };
        let mut bindings = BTreeMap::new();
        for pos in &class.positions {
            if self.rng.random_bool(0.5) {
                continue;
            }
            let perturb = self.rng.random_bool(0.15);
            let binding = match (&pos.object_type, seed.current(&pos.id).map(|p| &p.input)) {
                (ObjectType::Resource, Some(ObjectInput::Resource(r))) if !perturb => self.resource_binding(store, spec, r),
                (ObjectType::Literal, Some(ObjectInput::Literal(l))) if !perturb => Binding::Literal(self.literal_binding(l)),
                (ObjectType::Resource, _) => {
                    let any: Vec<&Upri> = store.resources.keys().collect();
                    Binding::Exact((*any.choose(&mut self.rng)?).clone())
                }
                (ObjectType::Literal, _) => {
                    let dt = pos.constraint.datatype.unwrap_or(Datatype::String);
                    let l = self.literal(dt, pos.constraint.pattern.as_deref());
                    Binding::Literal(LiteralSpec { exact: Some(l), ..Default::default() })
                }
            };
            bindings.insert(pos.id.clone(), binding);
        }
        Some(QuestionDraft { kgbb: seed.meta.kgbb_uri.clone(), subject, bindings })
    }
}

/// Applies one operation; rejected operations leave the store unchanged.
pub fn apply(engine: &mut Engine, op: &Op, prov: &Provenance) -> Result<(), EngineError> {
    match op {
        Op::Create { request } => engine.create(request, prov).map(drop),
        Op::Update { unit, position, value } => engine.update_position(unit, position, value, prov).map(drop),
        Op::Clear { unit, position } => engine.clear_position(unit, position, prov),
        Op::Delete { unit, cascade } => engine.soft_delete(unit, prov, *cascade).map(drop),
        Op::Version { unit } => engine.create_version(unit, prov).map(drop),
        Op::SetEditable { unit, editable } => engine.set_editable(unit, *editable, prov),
        Op::Question { draft } => engine.save_question(draft, prov).map(drop),
        Op::CompoundQuestion { tree } => engine.save_compound_question(tree, prov).map(drop),
    }
}

/// Runs `n` random operations and returns how many were applied and rejected.
pub fn run_ops(engine: &mut Engine, synth: &mut Synth, n: usize) -> OpStats {
    let mut stats = OpStats::default();
    for _ in 0..n {
        let op = synth.next_op(engine.store(), engine.spec());
        let prov = synth.user();
        match apply(engine, &op, &prov) {
            Ok(()) => stats.applied += 1,
            Err(_) => stats.rejected += 1,
        }
    }
    stats
}

/// A seeded engine over the demo specification grown to at least `units` semantic units.
pub fn random_engine(seed: u64, units: usize) -> Engine {
    let mut engine = Engine::seeded(Arc::new(demo_spec()), seed);
    let mut synth = Synth::new(seed);
    let mut guard = 0;
    while engine.store().units.len() < units && guard < units * 20 {
        run_ops(&mut engine, &mut synth, 1);
        guard += 1;
    }
    engine
}

/// Kinds of units in a store, for coverage reporting.
pub fn unit_kind_histogram(store: &Store) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for x in store.units.values() {
        let key = match x {
            SemanticUnit::Compound(c) => c.kind.as_str().to_string(),
            other => other.kind().as_str().to_string(),
        };
        *out.entry(key).or_insert(0) += 1;
    }
    out
}
