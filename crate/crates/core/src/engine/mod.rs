//! Creation, editing, deletion and versioning of semantic units under a specification.

mod aggregate;
mod derive;
mod ids;
mod read;
mod txn;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub(crate) use aggregate::associated_closure;
pub use aggregate::{aggregate_dynamic_metadata, AggregatedMetadata, LicenseOrder};
pub use derive::{
    derive_compound, derive_contexts, derive_granularity_trees, derive_item, derive_item_group, DeriveError, DerivedContext,
    DerivedItem, DerivedItemGroup, GranularityTree,
};
pub use ids::Ids;
pub use read::{read_unit, MaterializedUnit};

use crate::model::*;
use crate::query::{self, QuestionDraft, QueryError};
use crate::spec::Spec;
use txn::Txn;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown KGBB instance {0}")]
    UnknownKgbb(Upri),
    #[error("KGBB instance {0} is not reachable from a starting point")]
    NotReachable(Upri),
    #[error("{kgbb} units cannot be associated with compound {compound}")]
    NotAssociable { compound: Upri, kgbb: Upri },
    #[error("unknown semantic unit {0}")]
    UnknownUnit(Upri),
    #[error("semantic unit {0} is deleted")]
    UnitDeleted(Upri),
    #[error("semantic unit {0} is already deleted")]
    AlreadyDeleted(Upri),
    #[error("semantic unit {0} is not editable")]
    UnitLocked(Upri),
    #[error("{unit} is not a {expected} unit")]
    WrongUnitKind { unit: Upri, expected: &'static str },
    #[error("unknown resource {0}")]
    UnknownResource(Upri),
    #[error("resource {0} already exists with a different kind or class")]
    ResourceConflict(Upri),
    #[error("{kgbb} has no object position {position}")]
    UnknownPosition { kgbb: Upri, position: Upri },
    #[error("{kgbb} units need a subject")]
    MissingSubject { kgbb: Upri },
    #[error("required position {position} of {kgbb} is not bound")]
    MissingRequiredPosition { kgbb: Upri, position: Upri },
    #[error("{category} statements cannot take a {kind} object at {position}")]
    CategoryObjectMismatch { position: Upri, kind: ResourceKind, category: Category },
    #[error("constraint violated at {slot}: {detail}")]
    ConstraintViolation { slot: String, detail: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cascade node {node} allows at most {max} units")]
    MaxCountExceeded { node: Upri, max: u32 },
    #[error("cascade node {node} needs at least {min} units, got {got}")]
    CascadeUnderflow { node: Upri, min: u32, got: u32 },
    #[error("no cascade from {source_kgbb} accepts a {kgbb} unit")]
    UnexpectedCascadeInput { source_kgbb: Upri, kgbb: Upri },
    #[error("{version} is not a version of {unit}")]
    UnknownVersion { unit: Upri, version: Upri },
    #[error("licences {0} and {1} are not comparable")]
    IncomparableLicenses(Upri, Upri),
    #[error(transparent)]
    Query(#[from] QueryError),
}

/// Who performs an operation and with which application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub creator: Upri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub application: Option<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imported_from: Option<Upri>,
}

impl Provenance {
    pub fn user(creator: Upri) -> Self {
        Self { creator, application: None, imported_from: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewResource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upri: Option<Upri>,
    pub kind: ResourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A resource given as input: an existing identifier or a resource to mint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResourceRef {
    Existing(Upri),
    New(NewResource),
}

impl ResourceRef {
    pub fn new(kind: ResourceKind, class: Upri, label: &str) -> Self {
        ResourceRef::New(NewResource { upri: None, kind, class: Some(class), label: Some(label.to_string()) })
    }

    pub fn with_id(upri: Upri, kind: ResourceKind, class: Upri, label: &str) -> Self {
        ResourceRef::New(NewResource { upri: Some(upri), kind, class: Some(class), label: Some(label.to_string()) })
    }
}

impl From<Upri> for ResourceRef {
    fn from(u: Upri) -> Self {
        ResourceRef::Existing(u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputValue {
    Literal(Literal),
    Resource(ResourceRef),
}

impl From<Literal> for InputValue {
    fn from(l: Literal) -> Self {
        InputValue::Literal(l)
    }
}

impl From<ResourceRef> for InputValue {
    fn from(r: ResourceRef) -> Self {
        InputValue::Resource(r)
    }
}

impl From<Upri> for InputValue {
    fn from(u: Upri) -> Self {
        InputValue::Resource(ResourceRef::Existing(u))
    }
}

/// Optional statement-level metadata.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatementOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license: Option<Upri>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub access_restricted_to: BTreeSet<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logical_framework: Option<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_level: Option<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validity_start: Option<Timestamp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validity_end: Option<Timestamp>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub references: BTreeSet<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_production_metadata: Option<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub based_on_graph_pattern: Option<Upri>,
}

/// Request to create one unit, plus units created with it through the specification graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub kgbb: Upri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<ResourceRef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<Upri, InputValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category_choice: Option<ContingentChoice>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub negated: bool,
    #[serde(default)]
    pub options: StatementOptions,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cascade: Vec<CreateRequest>,
    /// Existing compound to add the new unit to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub associate_with: Option<Upri>,
}

impl CreateRequest {
    pub fn new(kgbb: Upri) -> Self {
        Self {
            kgbb,
            subject: None,
            inputs: BTreeMap::new(),
            category_choice: None,
            negated: false,
            options: StatementOptions::default(),
            cascade: Vec::new(),
            associate_with: None,
        }
    }

    pub fn subject(mut self, s: impl Into<ResourceRef>) -> Self {
        self.subject = Some(s.into());
        self
    }

    pub fn input(mut self, position: Upri, value: impl Into<InputValue>) -> Self {
        self.inputs.insert(position, value.into());
        self
    }

    pub fn cascade(mut self, child: CreateRequest) -> Self {
        self.cascade.push(child);
        self
    }

    pub fn associate_with(mut self, compound: Upri) -> Self {
        self.associate_with = Some(compound);
        self
    }

    pub fn choice(mut self, c: ContingentChoice) -> Self {
        self.category_choice = Some(c);
        self
    }

    pub fn negated(mut self) -> Self {
        self.negated = true;
        self
    }
}

/// Outcome of a create request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Created {
    pub unit: Upri,
    /// Every unit written by the request, including cascades and identification units.
    pub units: Vec<Upri>,
    pub resources: Vec<Upri>,
}

pub struct Engine {
    spec: Arc<Spec>,
    store: Store,
    ids: Ids,
}

impl Engine {
    pub fn new(spec: Arc<Spec>) -> Self {
        Self::with_store(spec, Store::default(), Ids::system())
    }

    /// An engine with reproducible identifiers and timestamps.
    pub fn seeded(spec: Arc<Spec>, seed: u64) -> Self {
        let start = DateTime::parse_from_rfc3339("2024-01-01T00:00:00Z").expect("static date").with_timezone(&Utc);
        Self::with_store(spec, Store::default(), Ids::seeded(seed, start))
    }

    pub fn with_store(spec: Arc<Spec>, store: Store, mut ids: Ids) -> Self {
        for t in latest_timestamps(&store) {
            ids.observe(t);
        }
        Self { spec, store, ids }
    }

    pub fn spec(&self) -> &Spec {
        &self.spec
    }

    pub fn spec_arc(&self) -> Arc<Spec> {
        self.spec.clone()
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn into_store(self) -> Store {
        self.store
    }

    /// Runs a mutation against a staging area and applies it only if it succeeds.
    fn transact<T>(&mut self, prov: &Provenance, f: impl FnOnce(&mut Txn<'_>) -> Result<T, EngineError>) -> Result<T, EngineError> {
        let mut tx = Txn::new(&self.spec, &self.store, &mut self.ids, prov);
        let out = f(&mut tx)?;
        let changes = tx.finish();
        self.store.units.extend(changes.units);
        self.store.resources.extend(changes.resources);
        self.store.versions.extend(changes.versions);
        Ok(out)
    }

    pub fn create(&mut self, req: &CreateRequest, prov: &Provenance) -> Result<Created, EngineError> {
        self.transact(prov, |tx| {
            let unit = tx.create_root(req)?;
            Ok(Created { unit, units: tx.staged_units(), resources: tx.staged_resources() })
        })
    }

    pub fn update_position(
        &mut self,
        unit: &Upri,
        position: &Upri,
        value: &InputValue,
        prov: &Provenance,
    ) -> Result<Upri, EngineError> {
        self.transact(prov, |tx| tx.update_position(unit, position, Some(value)))
            .map(|id| id.expect("a bound value yields an instance"))
    }

    /// Unbinds an optional position; the previous instance stays as history.
    pub fn clear_position(&mut self, unit: &Upri, position: &Upri, prov: &Provenance) -> Result<(), EngineError> {
        self.transact(prov, |tx| tx.update_position(unit, position, None)).map(|_| ())
    }

    pub fn soft_delete(&mut self, unit: &Upri, prov: &Provenance, cascade: bool) -> Result<Vec<Upri>, EngineError> {
        self.transact(prov, |tx| tx.soft_delete(unit, cascade))
    }

    pub fn set_editable(&mut self, unit: &Upri, editable: bool, prov: &Provenance) -> Result<(), EngineError> {
        self.transact(prov, |tx| tx.set_editable(unit, editable))
    }

    pub fn create_version(&mut self, unit: &Upri, prov: &Provenance) -> Result<Upri, EngineError> {
        self.transact(prov, |tx| tx.create_version(unit))
    }

    pub fn save_question(&mut self, draft: &QuestionDraft, prov: &Provenance) -> Result<Upri, EngineError> {
        self.transact(prov, |tx| tx.save_question(draft))
    }

    pub fn save_compound_question(&mut self, tree: &QuestionTree, prov: &Provenance) -> Result<Upri, EngineError> {
        self.transact(prov, |tx| tx.save_compound_question(tree))
    }

    pub fn read(&self, unit: &Upri, version: Option<&Upri>) -> Result<MaterializedUnit, EngineError> {
        read_unit(&self.store, unit, version, false)
    }

    /// Like [`Engine::read`] but also returns the current state of deleted units.
    pub fn read_including_deleted(&self, unit: &Upri) -> Result<MaterializedUnit, EngineError> {
        read_unit(&self.store, unit, None, true)
    }

    pub fn aggregate(&self, unit: &Upri) -> Result<AggregatedMetadata, EngineError> {
        aggregate_dynamic_metadata(&self.store, &self.spec.application, unit)
    }

    pub fn history(&self, unit: &Upri) -> Result<Vec<VersionNode>, EngineError> {
        if self.store.unit(unit).is_none() {
            return Err(EngineError::UnknownUnit(unit.clone()));
        }
        Ok(self.store.version_chain(unit).into_iter().cloned().collect())
    }

    pub fn answer(&self, question: &Upri) -> Result<query::Answer, EngineError> {
        Ok(query::execute_stored(&self.store, &self.spec, question)?)
    }
}

fn latest_timestamps(store: &Store) -> impl Iterator<Item = Timestamp> + '_ {
    store.units.values().flat_map(|u| {
        let m = u.meta();
        let mut ts = vec![m.creation_date];
        ts.extend(m.import_date);
        ts.extend(m.curation_date);
        ts.extend(m.deletion_date);
        if let SemanticUnit::Statement(s) = u {
            ts.extend(s.positions.values().map(|p| p.creation_date));
        }
        ts
    })
    .chain(store.versions.values().map(|v| v.creation_date))
}
