//! Flat field-level view of units, position instances, versions and resources.
//!
//! The RDF, property-graph and table codecs all go through this layer so that every
//! serialization carries the same fields under the same names.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldType {
    Iri,
    IriSet,
    IriList,
    Text,
    Bool,
    Time,
    Json,
    Literal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldValue {
    Iri(Upri),
    IriSet(BTreeSet<Upri>),
    IriList(Vec<Upri>),
    Text(String),
    Bool(bool),
    Time(Timestamp),
    Json(serde_json::Value),
    Literal(Literal),
}

#[derive(Debug, Clone, Copy)]
pub struct FieldDef {
    pub name: &'static str,
    /// Predicate used by the RDF codec; empty for the key and for fields the RDF
    /// codec encodes structurally.
    pub predicate: &'static str,
    pub ty: FieldType,
}

pub type Record = BTreeMap<&'static str, FieldValue>;

const fn f(name: &'static str, predicate: &'static str, ty: FieldType) -> FieldDef {
    FieldDef { name, predicate, ty }
}

use FieldType as T;

pub const KEY: &str = "upri";

pub const UNIT_FIELDS: &[FieldDef] = &[
    f(KEY, "", T::Iri),
    f("unit_kind", vocab::UNIT_KIND, T::Text),
    f("label", vocab::RDFS_LABEL, T::Text),
    f("types", vocab::RDF_TYPE, T::IriSet),
    f("subject", vocab::HAS_SEMANTIC_UNIT_SUBJECT, T::Iri),
    f("kgbb_uri", vocab::KGBB_URI, T::Iri),
    f("creator", vocab::CREATOR, T::Iri),
    f("creation_date", vocab::CREATION_DATE, T::Time),
    f("created_with_application", vocab::CREATED_WITH_APPLICATION, T::Iri),
    f("imported_from", vocab::IMPORTED_FROM, T::Iri),
    f("import_date", vocab::IMPORT_DATE, T::Time),
    f("curator", vocab::CURATOR, T::Iri),
    f("curation_date", vocab::CURATION_DATE, T::Time),
    f("deleted_by", vocab::DELETED_BY, T::Iri),
    f("deletion_date", vocab::DELETION_DATE, T::Time),
    f("data_production_metadata", vocab::DATA_PRODUCTION_METADATA, T::Iri),
    f("version_ids", vocab::VERSION_ID, T::IriSet),
    f("dataset_unit_ids", vocab::DATASET_UNIT_ID, T::IriSet),
    f("editable", vocab::EDITABLE, T::Bool),
    f("has_current_version", vocab::HAS_CURRENT_VERSION, T::Iri),
    f("category", vocab::STATEMENT_CATEGORY, T::Text),
    f("negated", vocab::NEGATED, T::Bool),
    f("object_described_by", vocab::OBJECT_DESCRIBED_BY_SEMANTIC_UNIT, T::IriSet),
    f("based_on_graph_pattern", vocab::BASED_ON_GRAPH_PATTERN, T::Iri),
    f("constraint_nodes", vocab::HAS_CONSTRAINT_NODE, T::Json),
    f("license", vocab::LICENSE, T::Iri),
    f("access_restricted_to", vocab::ACCESS_RESTRICTED_TO, T::IriSet),
    f("logical_framework", vocab::LOGICAL_FRAMEWORK, T::Iri),
    f("confidence_level", vocab::HAS_CONFIDENCE_LEVEL, T::Literal),
    f("validity_start", vocab::VALIDITY_START_DATE, T::Time),
    f("validity_end", vocab::VALIDITY_END_DATE, T::Time),
    f("references", vocab::REFERENCE, T::IriSet),
    f("compound_kind", vocab::COMPOUND_KIND, T::Text),
    f("associated", vocab::HAS_ASSOCIATED_SEMANTIC_UNIT, T::IriSet),
    f("linked", vocab::HAS_LINKED_SEMANTIC_UNIT, T::IriSet),
    f("member_order", vocab::MEMBER_ORDER, T::IriList),
    f("statement_kgbb", vocab::BASED_ON_STATEMENT_KGBB, T::Iri),
    f("subject_binding", vocab::SUBJECT_BINDING, T::Json),
    f("bindings", vocab::POSITION_BINDINGS, T::Json),
    f("answer_mode", vocab::ANSWER_MODE, T::Text),
    f("question_tree", vocab::QUESTION_TREE, T::Json),
];

pub const OWNER: &str = "statement_unit";
pub const LINK: &str = "link";

pub const POSITION_FIELDS: &[FieldDef] = &[
    f(KEY, "", T::Iri),
    f(OWNER, "", T::Iri),
    f(LINK, "", T::Text),
    f("position_class", vocab::RDF_TYPE, T::Iri),
    f("input_type_label", vocab::INPUT_TYPE_LABEL, T::Text),
    f("resource_uri", vocab::RESOURCE_URI, T::Iri),
    f("literal", vocab::LITERAL, T::Literal),
    f("logical_property", vocab::LOGICAL_PROPERTY, T::Iri),
    f("current_version", vocab::CURRENT_VERSION, T::Bool),
    f("creator", vocab::CREATOR, T::Iri),
    f("creation_date", vocab::CREATION_DATE, T::Time),
    f("created_with_application", vocab::CREATED_WITH_APPLICATION, T::Iri),
    f("imported_from", vocab::IMPORTED_FROM, T::Iri),
    f("version_ids", vocab::VERSION_ID, T::IriSet),
    f("dataset_unit_ids", vocab::DATASET_UNIT_ID, T::IriSet),
];

pub const VERSION_FIELDS: &[FieldDef] = &[
    f(KEY, "", T::Iri),
    f("version_of", vocab::VERSION_OF, T::Iri),
    f("creator", vocab::CREATOR, T::Iri),
    f("creation_date", vocab::CREATION_DATE, T::Time),
    f("previous", vocab::PREVIOUS_VERSION, T::Iri),
    f("content_id", vocab::CONTENT_ID, T::Text),
];

pub const RESOURCE_FIELDS: &[FieldDef] = &[
    f(KEY, "", T::Iri),
    f("kind", vocab::RESOURCE_KIND, T::Text),
    f("class_affiliation", vocab::CLASS_AFFILIATION, T::Iri),
    f("label", vocab::RDFS_LABEL, T::Text),
];

pub fn field<'a>(schema: &'a [FieldDef], name: &str) -> Option<&'a FieldDef> {
    schema.iter().find(|d| d.name == name)
}

pub fn field_by_predicate<'a>(schema: &'a [FieldDef], predicate: &str) -> Option<&'a FieldDef> {
    schema.iter().find(|d| !d.predicate.is_empty() && d.predicate == predicate)
}

#[derive(Default)]
struct Builder(Record);

impl Builder {
    fn iri(&mut self, k: &'static str, v: &Upri) -> &mut Self {
        self.0.insert(k, FieldValue::Iri(v.clone()));
        self
    }
    fn opt_iri(&mut self, k: &'static str, v: &Option<Upri>) -> &mut Self {
        if let Some(v) = v {
            self.iri(k, v);
        }
        self
    }
    fn set(&mut self, k: &'static str, v: &BTreeSet<Upri>) -> &mut Self {
        if !v.is_empty() {
            self.0.insert(k, FieldValue::IriSet(v.clone()));
        }
        self
    }
    fn text(&mut self, k: &'static str, v: &str) -> &mut Self {
        self.0.insert(k, FieldValue::Text(v.to_string()));
        self
    }
    fn opt_text(&mut self, k: &'static str, v: &Option<String>) -> &mut Self {
        if let Some(v) = v {
            self.text(k, v);
        }
        self
    }
    fn boolean(&mut self, k: &'static str, v: bool) -> &mut Self {
        self.0.insert(k, FieldValue::Bool(v));
        self
    }
    fn time(&mut self, k: &'static str, v: Timestamp) -> &mut Self {
        self.0.insert(k, FieldValue::Time(v));
        self
    }
    fn opt_time(&mut self, k: &'static str, v: Option<Timestamp>) -> &mut Self {
        if let Some(v) = v {
            self.time(k, v);
        }
        self
    }
    fn json<S: Serialize>(&mut self, k: &'static str, v: &S) -> &mut Self {
        self.0.insert(k, FieldValue::Json(serde_json::to_value(v).expect("model types serialize")));
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("field `{field}` has the wrong shape: {detail}")]
    Shape { field: &'static str, detail: String },
}

pub struct Reader(Record);

impl Reader {
    pub fn new(record: Record) -> Self {
        Self(record)
    }
    fn take(&mut self, k: &'static str) -> Option<FieldValue> {
        self.0.remove(k)
    }
    fn shape(k: &'static str, v: &FieldValue) -> RecordError {
        RecordError::Shape { field: k, detail: format!("{v:?}") }
    }
    pub fn opt_iri(&mut self, k: &'static str) -> Result<Option<Upri>, RecordError> {
        match self.take(k) {
            None => Ok(None),
            Some(FieldValue::Iri(u)) => Ok(Some(u)),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn iri(&mut self, k: &'static str) -> Result<Upri, RecordError> {
        self.opt_iri(k)?.ok_or(RecordError::Missing(k))
    }
    pub fn set(&mut self, k: &'static str) -> Result<BTreeSet<Upri>, RecordError> {
        match self.take(k) {
            None => Ok(BTreeSet::new()),
            Some(FieldValue::IriSet(s)) => Ok(s),
            Some(FieldValue::Iri(u)) => Ok(BTreeSet::from([u])),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn list(&mut self, k: &'static str) -> Result<Vec<Upri>, RecordError> {
        match self.take(k) {
            None => Ok(Vec::new()),
            Some(FieldValue::IriList(s)) => Ok(s),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn opt_text(&mut self, k: &'static str) -> Result<Option<String>, RecordError> {
        match self.take(k) {
            None => Ok(None),
            Some(FieldValue::Text(s)) => Ok(Some(s)),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn text(&mut self, k: &'static str) -> Result<String, RecordError> {
        self.opt_text(k)?.ok_or(RecordError::Missing(k))
    }
    pub fn boolean(&mut self, k: &'static str) -> Result<bool, RecordError> {
        match self.take(k) {
            None => Err(RecordError::Missing(k)),
            Some(FieldValue::Bool(b)) => Ok(b),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn opt_time(&mut self, k: &'static str) -> Result<Option<Timestamp>, RecordError> {
        match self.take(k) {
            None => Ok(None),
            Some(FieldValue::Time(t)) => Ok(Some(t)),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn time(&mut self, k: &'static str) -> Result<Timestamp, RecordError> {
        self.opt_time(k)?.ok_or(RecordError::Missing(k))
    }
    pub fn opt_literal(&mut self, k: &'static str) -> Result<Option<Literal>, RecordError> {
        match self.take(k) {
            None => Ok(None),
            Some(FieldValue::Literal(l)) => Ok(Some(l)),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn opt_json<D: DeserializeOwned>(&mut self, k: &'static str) -> Result<Option<D>, RecordError> {
        match self.take(k) {
            None => Ok(None),
            Some(FieldValue::Json(j)) => serde_json::from_value(j)
                .map(Some)
                .map_err(|e| RecordError::Shape { field: k, detail: e.to_string() }),
            Some(v) => Err(Self::shape(k, &v)),
        }
    }
    pub fn json<D: DeserializeOwned>(&mut self, k: &'static str) -> Result<D, RecordError> {
        self.opt_json(k)?.ok_or(RecordError::Missing(k))
    }
    fn parsed<X>(&mut self, k: &'static str, parse: impl Fn(&str) -> Option<X>) -> Result<X, RecordError> {
        let s = self.text(k)?;
        parse(&s).ok_or(RecordError::Shape { field: k, detail: s })
    }
}

pub fn unit_to_record(unit: &SemanticUnit) -> Record {
    let m = unit.meta();
    let mut b = Builder::default();
    b.iri(KEY, &m.upri)
        .text("unit_kind", unit.kind().as_str())
        .text("label", &m.label)
        .set("types", &m.types)
        .opt_iri("subject", &m.subject)
        .iri("kgbb_uri", &m.kgbb_uri)
        .iri("creator", &m.creator)
        .time("creation_date", m.creation_date)
        .iri("created_with_application", &m.created_with_application)
        .opt_iri("imported_from", &m.imported_from)
        .opt_time("import_date", m.import_date)
        .opt_iri("curator", &m.curator)
        .opt_time("curation_date", m.curation_date)
        .opt_iri("deleted_by", &m.deleted_by)
        .opt_time("deletion_date", m.deletion_date)
        .opt_iri("data_production_metadata", &m.data_production_metadata)
        .set("version_ids", &m.version_ids)
        .set("dataset_unit_ids", &m.dataset_unit_ids)
        .boolean("editable", m.editable)
        .opt_iri("has_current_version", &m.has_current_version);
    match unit {
        SemanticUnit::Statement(s) => {
            b.text("category", s.category.as_str())
                .boolean("negated", s.negated)
                .set("object_described_by", &s.object_described_by)
                .opt_iri("based_on_graph_pattern", &s.based_on_graph_pattern)
                .opt_iri("license", &s.license)
                .set("access_restricted_to", &s.access_restricted_to)
                .opt_iri("logical_framework", &s.logical_framework)
                .opt_time("validity_start", s.validity_start)
                .opt_time("validity_end", s.validity_end)
                .set("references", &s.references);
            if !s.constraint_nodes.is_empty() {
                b.json("constraint_nodes", &s.constraint_nodes);
            }
            if let Some(c) = &s.confidence_level {
                b.0.insert("confidence_level", FieldValue::Literal(c.clone()));
            }
        }
        SemanticUnit::Compound(c) => {
            b.text("compound_kind", c.kind.as_str()).set("associated", &c.associated).set("linked", &c.linked);
            if !c.member_order.is_empty() {
                b.0.insert("member_order", FieldValue::IriList(c.member_order.clone()));
            }
        }
        SemanticUnit::Question(q) => {
            b.iri("statement_kgbb", &q.statement_kgbb)
                .json("bindings", &q.bindings)
                .text("answer_mode", if q.mode == AnswerMode::Boolean { "boolean" } else { "retrieval" });
            if let Some(sb) = &q.subject_binding {
                b.json("subject_binding", sb);
            }
        }
        SemanticUnit::CompoundQuestion(q) => {
            b.json("question_tree", &q.tree);
        }
    }
    b.0
}

pub fn unit_from_record(record: Record) -> Result<SemanticUnit, RecordError> {
    let mut r = Reader::new(record);
    let kind = r.parsed("unit_kind", UnitKind::parse)?;
    let meta = SemanticUnitMeta {
        upri: r.iri(KEY)?,
        label: r.text("label")?,
        types: r.set("types")?,
        subject: r.opt_iri("subject")?,
        kgbb_uri: r.iri("kgbb_uri")?,
        creator: r.iri("creator")?,
        creation_date: r.time("creation_date")?,
        created_with_application: r.iri("created_with_application")?,
        imported_from: r.opt_iri("imported_from")?,
        import_date: r.opt_time("import_date")?,
        curator: r.opt_iri("curator")?,
        curation_date: r.opt_time("curation_date")?,
        deleted_by: r.opt_iri("deleted_by")?,
        deletion_date: r.opt_time("deletion_date")?,
        data_production_metadata: r.opt_iri("data_production_metadata")?,
        version_ids: r.set("version_ids")?,
        dataset_unit_ids: r.set("dataset_unit_ids")?,
        editable: r.boolean("editable")?,
        has_current_version: r.opt_iri("has_current_version")?,
    };
    Ok(match kind {
        UnitKind::Statement => {
            if meta.subject.is_none() {
                return Err(RecordError::Missing("subject"));
            }
            SemanticUnit::Statement(StatementUnit {
                category: r.parsed("category", Category::parse)?,
                negated: r.boolean("negated")?,
                object_described_by: r.set("object_described_by")?,
                based_on_graph_pattern: r.opt_iri("based_on_graph_pattern")?,
                constraint_nodes: r.opt_json("constraint_nodes")?.unwrap_or_default(),
                license: r.opt_iri("license")?,
                access_restricted_to: r.set("access_restricted_to")?,
                logical_framework: r.opt_iri("logical_framework")?,
                confidence_level: r.opt_literal("confidence_level")?,
                validity_start: r.opt_time("validity_start")?,
                validity_end: r.opt_time("validity_end")?,
                references: r.set("references")?,
                positions: BTreeMap::new(),
                meta,
            })
        }
        UnitKind::Compound => SemanticUnit::Compound(CompoundUnit {
            kind: r.parsed("compound_kind", CompoundKind::parse)?,
            associated: r.set("associated")?,
            linked: r.set("linked")?,
            member_order: r.list("member_order")?,
            meta,
        }),
        UnitKind::Question => SemanticUnit::Question(QuestionUnit {
            statement_kgbb: r.iri("statement_kgbb")?,
            subject_binding: r.opt_json("subject_binding")?,
            bindings: r.json("bindings")?,
            mode: r.parsed("answer_mode", |s| match s {
                "boolean" => Some(AnswerMode::Boolean),
                "retrieval" => Some(AnswerMode::Retrieval),
                _ => None,
            })?,
            meta,
        }),
        UnitKind::CompoundQuestion => SemanticUnit::CompoundQuestion(CompoundQuestionUnit { tree: r.json("question_tree")?, meta }),
    })
}

pub fn position_to_record(owner: &Upri, p: &ObjectPositionInstance) -> Record {
    let mut b = Builder::default();
    b.iri(KEY, &p.upri)
        .iri(OWNER, owner)
        .text(LINK, if p.link == PositionLink::Required { "required" } else { "optional" })
        .iri("position_class", &p.position_class)
        .text("input_type_label", &p.input_type_label)
        .boolean("current_version", p.current_version)
        .iri("creator", &p.creator)
        .time("creation_date", p.creation_date)
        .iri("created_with_application", &p.created_with_application)
        .opt_iri("imported_from", &p.imported_from)
        .set("version_ids", &p.version_ids)
        .set("dataset_unit_ids", &p.dataset_unit_ids);
    match &p.input {
        ObjectInput::Resource(u) => {
            b.iri("resource_uri", u);
        }
        ObjectInput::Literal(l) => {
            b.0.insert("literal", FieldValue::Literal(l.clone()));
        }
    }
    if let Some(iri) = p.logical_property.and_then(LogicalProperty::instance_iri) {
        b.iri("logical_property", &Upri::from_static(iri));
    }
    b.0
}

pub fn position_from_record(record: Record) -> Result<(Upri, ObjectPositionInstance), RecordError> {
    let mut r = Reader::new(record);
    let owner = r.iri(OWNER)?;
    let link = r.parsed(LINK, |s| match s {
        "required" => Some(PositionLink::Required),
        "optional" => Some(PositionLink::Optional),
        _ => None,
    })?;
    let input = match (r.opt_iri("resource_uri")?, r.opt_literal("literal")?) {
        (Some(u), None) => ObjectInput::Resource(u),
        (None, Some(l)) => ObjectInput::Literal(l),
        _ => return Err(RecordError::Shape { field: "resource_uri", detail: "exactly one of resource_uri, literal".into() }),
    };
    let logical_property = match r.opt_iri("logical_property")? {
        None => None,
        Some(u) => Some(
            LogicalProperty::from_instance_iri(u.as_str())
                .ok_or(RecordError::Shape { field: "logical_property", detail: u.to_string() })?,
        ),
    };
    let p = ObjectPositionInstance {
        upri: r.iri(KEY)?,
        position_class: r.iri("position_class")?,
        input_type_label: r.text("input_type_label")?,
        input,
        logical_property,
        link,
        current_version: r.boolean("current_version")?,
        creator: r.iri("creator")?,
        creation_date: r.time("creation_date")?,
        created_with_application: r.iri("created_with_application")?,
        imported_from: r.opt_iri("imported_from")?,
        version_ids: r.set("version_ids")?,
        dataset_unit_ids: r.set("dataset_unit_ids")?,
    };
    Ok((owner, p))
}

pub fn version_to_record(v: &VersionNode) -> Record {
    let mut b = Builder::default();
    b.iri(KEY, &v.upri)
        .iri("version_of", &v.version_of)
        .iri("creator", &v.creator)
        .time("creation_date", v.creation_date)
        .opt_iri("previous", &v.previous)
        .opt_text("content_id", &v.content_id);
    b.0
}

pub fn version_from_record(record: Record) -> Result<VersionNode, RecordError> {
    let mut r = Reader::new(record);
    Ok(VersionNode {
        upri: r.iri(KEY)?,
        version_of: r.iri("version_of")?,
        creator: r.iri("creator")?,
        creation_date: r.time("creation_date")?,
        previous: r.opt_iri("previous")?,
        content_id: r.opt_text("content_id")?,
    })
}

pub fn resource_to_record(res: &Resource) -> Record {
    let mut b = Builder::default();
    b.iri(KEY, &res.upri)
        .text("kind", res.kind.as_str())
        .opt_iri("class_affiliation", &res.class_affiliation)
        .opt_text("label", &res.label);
    b.0
}

pub fn resource_from_record(record: Record) -> Result<Resource, RecordError> {
    let mut r = Reader::new(record);
    let upri = r.iri(KEY)?;
    let kind = r.parsed("kind", ResourceKind::parse)?;
    Resource::new(upri, kind, r.opt_iri("class_affiliation")?, r.opt_text("label")?)
        .map_err(|e| RecordError::Shape { field: "class_affiliation", detail: e.to_string() })
}

/// Splits a store into flat records: units, positions, versions, resources.
pub fn store_to_records(store: &Store) -> [Vec<Record>; 4] {
    let units = store.units.values().map(unit_to_record).collect();
    let positions = store
        .units
        .values()
        .filter_map(SemanticUnit::as_statement)
        .flat_map(|s| s.positions.values().map(|p| position_to_record(&s.meta.upri, p)))
        .collect();
    let versions = store.versions.values().map(version_to_record).collect();
    let resources = store.resources.values().map(resource_to_record).collect();
    [units, positions, versions, resources]
}

#[derive(Debug, thiserror::Error)]
pub enum AssembleError {
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error("object position {position} belongs to unknown statement unit {owner}")]
    OrphanPosition { owner: Upri, position: Upri },
    #[error("duplicate identifier {0}")]
    Duplicate(Upri),
}

/// Inverse of [`store_to_records`].
pub fn store_from_records(
    units: Vec<Record>,
    positions: Vec<Record>,
    versions: Vec<Record>,
    resources: Vec<Record>,
) -> Result<Store, AssembleError> {
    let mut store = Store::default();
    for r in units {
        let u = unit_from_record(r)?;
        let id = u.upri().clone();
        if store.units.insert(id.clone(), u).is_some() {
            return Err(AssembleError::Duplicate(id));
        }
    }
    for r in positions {
        let (owner, p) = position_from_record(r)?;
        match store.units.get_mut(&owner) {
            Some(SemanticUnit::Statement(s)) => {
                let id = p.upri.clone();
                if s.positions.insert(id.clone(), p).is_some() {
                    return Err(AssembleError::Duplicate(id));
                }
            }
            _ => return Err(AssembleError::OrphanPosition { owner, position: p.upri }),
        }
    }
    for r in versions {
        let v = version_from_record(r)?;
        let id = v.upri.clone();
        if store.versions.insert(id.clone(), v).is_some() {
            return Err(AssembleError::Duplicate(id));
        }
    }
    for r in resources {
        let res = resource_from_record(r)?;
        let id = res.upri.clone();
        if store.resources.insert(id.clone(), res).is_some() {
            return Err(AssembleError::Duplicate(id));
        }
    }
    Ok(store)
}
