use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{vocab, Datatype, Literal, ModelError, ResourceKind, Term, Timestamp, Triple, Upri};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Lexical,
    Assertional,
    Contingent,
    Prototypical,
    Universal,
}

impl Category {
    pub const ALL: [Category; 5] =
        [Category::Lexical, Category::Assertional, Category::Contingent, Category::Prototypical, Category::Universal];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Lexical => "lexical",
            Category::Assertional => "assertional",
            Category::Contingent => "contingent",
            Category::Prototypical => "prototypical",
            Category::Universal => "universal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn unit_class(self) -> &'static str {
        match self {
            Category::Lexical => vocab::LEXICAL_STATEMENT_UNIT,
            Category::Assertional => vocab::ASSERTIONAL_STATEMENT_UNIT,
            Category::Contingent => vocab::CONTINGENT_STATEMENT_UNIT,
            Category::Prototypical => vocab::PROTOTYPICAL_STATEMENT_UNIT,
            Category::Universal => vocab::UNIVERSAL_STATEMENT_UNIT,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The user's reading of a statement about a some-instance subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContingentChoice {
    Contingent,
    Prototypical,
}

/// Category of a non-lexical statement, decided by the kind of its subject.
pub fn classify_category(subject: ResourceKind, choice: Option<ContingentChoice>) -> Result<Category, ModelError> {
    match subject {
        ResourceKind::NamedIndividual => Ok(Category::Assertional),
        ResourceKind::Class | ResourceKind::EveryInstance => Ok(Category::Universal),
        ResourceKind::SomeInstance => match choice {
            Some(ContingentChoice::Contingent) => Ok(Category::Contingent),
            Some(ContingentChoice::Prototypical) => Ok(Category::Prototypical),
            None => Err(ModelError::ChoiceRequired),
        },
        ResourceKind::Property => Err(ModelError::PropertySubject),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AllowedKinds {
    Kinds(&'static [ResourceKind]),
    NotApplicable,
}

impl AllowedKinds {
    pub fn allows(&self, kind: ResourceKind) -> bool {
        match self {
            AllowedKinds::Kinds(ks) => ks.contains(&kind),
            AllowedKinds::NotApplicable => false,
        }
    }
}

pub fn allowed_object_resource_kinds(category: Category) -> AllowedKinds {
    match category {
        Category::Assertional => AllowedKinds::Kinds(&[ResourceKind::NamedIndividual]),
        Category::Universal => AllowedKinds::Kinds(&[ResourceKind::SomeInstance, ResourceKind::Class]),
        Category::Contingent | Category::Prototypical => AllowedKinds::Kinds(&[ResourceKind::SomeInstance]),
        Category::Lexical => AllowedKinds::NotApplicable,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogicalProperty {
    Transitive,
    Symmetric,
    Asymmetric,
    Functional,
}

impl LogicalProperty {
    pub fn as_str(self) -> &'static str {
        match self {
            LogicalProperty::Transitive => "transitive",
            LogicalProperty::Symmetric => "symmetric",
            LogicalProperty::Asymmetric => "asymmetric",
            LogicalProperty::Functional => "functional",
        }
    }

    /// The IRI recorded on object-position instances. Functionality is a class-level
    /// characteristic and has no instance marker.
    pub fn instance_iri(self) -> Option<&'static str> {
        match self {
            LogicalProperty::Transitive => Some(vocab::TRANSITIVE),
            LogicalProperty::Symmetric => Some(vocab::SYMMETRIC),
            LogicalProperty::Asymmetric => Some(vocab::ASYMMETRIC),
            LogicalProperty::Functional => None,
        }
    }

    pub fn from_instance_iri(iri: &str) -> Option<Self> {
        [LogicalProperty::Transitive, LogicalProperty::Symmetric, LogicalProperty::Asymmetric]
            .into_iter()
            .find(|p| p.instance_iri() == Some(iri))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositionLink {
    Required,
    Optional,
}

impl PositionLink {
    pub fn predicate(self) -> &'static str {
        match self {
            PositionLink::Required => vocab::REQUIRED_OBJECT_POSITION,
            PositionLink::Optional => vocab::OPTIONAL_OBJECT_POSITION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectInput {
    Resource(Upri),
    Literal(Literal),
}

impl ObjectInput {
    pub fn as_resource(&self) -> Option<&Upri> {
        match self {
            ObjectInput::Resource(u) => Some(u),
            ObjectInput::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            ObjectInput::Literal(l) => Some(l),
            ObjectInput::Resource(_) => None,
        }
    }
}

/// One value bound to one object position of a statement unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectPositionInstance {
    pub upri: Upri,
    pub position_class: Upri,
    pub input_type_label: String,
    pub input: ObjectInput,
    pub logical_property: Option<LogicalProperty>,
    pub link: PositionLink,
    pub current_version: bool,
    pub creator: Upri,
    pub creation_date: Timestamp,
    pub created_with_application: Upri,
    pub imported_from: Option<Upri>,
    pub version_ids: BTreeSet<Upri>,
    pub dataset_unit_ids: BTreeSet<Upri>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConstraintNode {
    pub upri: Upri,
    pub has_constraint: String,
    pub applies_to_object_position: Upri,
}

impl ConstraintNode {
    /// The class named by a `range: <class>` constraint expression.
    pub fn range_class(&self) -> Option<Upri> {
        self.has_constraint.strip_prefix("range:").and_then(|c| Upri::new(c.trim()).ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticUnitMeta {
    pub upri: Upri,
    pub label: String,
    pub types: BTreeSet<Upri>,
    pub subject: Option<Upri>,
    pub kgbb_uri: Upri,
    pub creator: Upri,
    pub creation_date: Timestamp,
    pub created_with_application: Upri,
    pub imported_from: Option<Upri>,
    pub import_date: Option<Timestamp>,
    pub curator: Option<Upri>,
    pub curation_date: Option<Timestamp>,
    pub deleted_by: Option<Upri>,
    pub deletion_date: Option<Timestamp>,
    pub data_production_metadata: Option<Upri>,
    pub version_ids: BTreeSet<Upri>,
    pub dataset_unit_ids: BTreeSet<Upri>,
    pub editable: bool,
    pub has_current_version: Option<Upri>,
}

impl SemanticUnitMeta {
    pub fn is_deleted(&self) -> bool {
        self.deleted_by.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementUnit {
    pub meta: SemanticUnitMeta,
    pub category: Category,
    pub negated: bool,
    pub object_described_by: BTreeSet<Upri>,
    pub based_on_graph_pattern: Option<Upri>,
    pub constraint_nodes: BTreeSet<ConstraintNode>,
    pub license: Option<Upri>,
    pub access_restricted_to: BTreeSet<Upri>,
    pub logical_framework: Option<Upri>,
    pub confidence_level: Option<Literal>,
    pub validity_start: Option<Timestamp>,
    pub validity_end: Option<Timestamp>,
    pub references: BTreeSet<Upri>,
    pub positions: BTreeMap<Upri, ObjectPositionInstance>,
}

impl StatementUnit {
    pub fn subject(&self) -> &Upri {
        self.meta.subject.as_ref().expect("statement units always have a subject")
    }

    pub fn current_positions(&self) -> impl Iterator<Item = &ObjectPositionInstance> {
        self.positions.values().filter(|p| p.current_version)
    }

    /// The current instance for a position class, if bound.
    pub fn current(&self, position_class: &Upri) -> Option<&ObjectPositionInstance> {
        self.current_positions().find(|p| &p.position_class == position_class)
    }

    /// Instances that carried the given version id.
    pub fn positions_at(&self, version: &Upri) -> impl Iterator<Item = &ObjectPositionInstance> {
        let version = version.clone();
        self.positions.values().filter(move |p| p.version_ids.contains(&version))
    }

    /// Triples of the unit's data graph, one group per object-position instance.
    pub fn data_graph(&self) -> Vec<Triple> {
        let mut out = Vec::new();
        for p in self.positions.values() {
            position_triples(self.subject(), p, &mut out);
        }
        out
    }
}

pub(crate) fn position_triples(subject: &Upri, p: &ObjectPositionInstance, out: &mut Vec<Triple>) {
    let s = || p.upri.clone();
    out.push(Triple::new(subject.clone(), p.link.predicate(), Term::Iri(p.upri.clone())));
    out.push(Triple::new(s(), vocab::RDF_TYPE, Term::Iri(p.position_class.clone())));
    out.push(Triple::new(s(), vocab::INPUT_TYPE_LABEL, Term::Literal(Literal::string(&p.input_type_label))));
    match &p.input {
        ObjectInput::Resource(r) => out.push(Triple::new(s(), vocab::RESOURCE_URI, Term::Iri(r.clone()))),
        ObjectInput::Literal(l) => out.push(Triple::new(s(), vocab::LITERAL, Term::Literal(l.clone()))),
    }
    if let Some(iri) = p.logical_property.and_then(LogicalProperty::instance_iri) {
        out.push(Triple::new(s(), vocab::LOGICAL_PROPERTY, Term::iri(iri)));
    }
    out.push(Triple::new(s(), vocab::CURRENT_VERSION, Term::boolean(p.current_version)));
    out.push(Triple::new(s(), vocab::CREATOR, Term::Iri(p.creator.clone())));
    out.push(Triple::new(s(), vocab::CREATION_DATE, Term::time(p.creation_date)));
    out.push(Triple::new(s(), vocab::CREATED_WITH_APPLICATION, Term::Iri(p.created_with_application.clone())));
    if let Some(i) = &p.imported_from {
        out.push(Triple::new(s(), vocab::IMPORTED_FROM, Term::Iri(i.clone())));
    }
    for v in &p.version_ids {
        out.push(Triple::new(s(), vocab::VERSION_ID, Term::Iri(v.clone())));
    }
    for d in &p.dataset_unit_ids {
        out.push(Triple::new(s(), vocab::DATASET_UNIT_ID, Term::Iri(d.clone())));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompoundKind {
    Item,
    ItemGroup,
    GranularityTree,
    Context,
    Dataset,
    List,
}

impl CompoundKind {
    pub const ALL: [CompoundKind; 6] = [
        CompoundKind::Item,
        CompoundKind::ItemGroup,
        CompoundKind::GranularityTree,
        CompoundKind::Context,
        CompoundKind::Dataset,
        CompoundKind::List,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CompoundKind::Item => "item",
            CompoundKind::ItemGroup => "item-group",
            CompoundKind::GranularityTree => "granularity-tree",
            CompoundKind::Context => "context",
            CompoundKind::Dataset => "dataset",
            CompoundKind::List => "list",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    pub fn is_ordered(self) -> bool {
        matches!(self, CompoundKind::Dataset | CompoundKind::List)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompoundUnit {
    pub meta: SemanticUnitMeta,
    pub kind: CompoundKind,
    pub associated: BTreeSet<Upri>,
    pub linked: BTreeSet<Upri>,
    /// Member order for datasets and lists.
    pub member_order: Vec<Upri>,
}

/// Constraint on a literal object in a question.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datatype: Option<Datatype>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Binding {
    Exact(Upri),
    SomeInstanceOf(Upri),
    EveryInstanceOf(Upri),
    Class(Upri),
    Literal(LiteralSpec),
}

impl Binding {
    pub fn is_exact(&self) -> bool {
        match self {
            Binding::Exact(_) => true,
            Binding::Literal(spec) => spec.exact.is_some(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerMode {
    Boolean,
    Retrieval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionUnit {
    pub meta: SemanticUnitMeta,
    pub statement_kgbb: Upri,
    pub subject_binding: Option<Binding>,
    pub bindings: BTreeMap<Upri, Binding>,
    pub mode: AnswerMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuestionTree {
    Question(Upri),
    And(Vec<QuestionTree>),
    Or(Vec<QuestionTree>),
}

impl QuestionTree {
    pub fn leaves(&self) -> Vec<&Upri> {
        match self {
            QuestionTree::Question(q) => vec![q],
            QuestionTree::And(c) | QuestionTree::Or(c) => c.iter().flat_map(QuestionTree::leaves).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompoundQuestionUnit {
    pub meta: SemanticUnitMeta,
    pub tree: QuestionTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitKind {
    Statement,
    Compound,
    Question,
    CompoundQuestion,
}

impl UnitKind {
    pub const ALL: [UnitKind; 4] = [UnitKind::Statement, UnitKind::Compound, UnitKind::Question, UnitKind::CompoundQuestion];

    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Statement => "statement",
            UnitKind::Compound => "compound",
            UnitKind::Question => "question",
            UnitKind::CompoundQuestion => "compound-question",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "unit_kind", rename_all = "kebab-case")]
pub enum SemanticUnit {
    Statement(StatementUnit),
    Compound(CompoundUnit),
    Question(QuestionUnit),
    CompoundQuestion(CompoundQuestionUnit),
}

impl SemanticUnit {
    pub fn meta(&self) -> &SemanticUnitMeta {
        match self {
            SemanticUnit::Statement(u) => &u.meta,
            SemanticUnit::Compound(u) => &u.meta,
            SemanticUnit::Question(u) => &u.meta,
            SemanticUnit::CompoundQuestion(u) => &u.meta,
        }
    }

    pub fn meta_mut(&mut self) -> &mut SemanticUnitMeta {
        match self {
            SemanticUnit::Statement(u) => &mut u.meta,
            SemanticUnit::Compound(u) => &mut u.meta,
            SemanticUnit::Question(u) => &mut u.meta,
            SemanticUnit::CompoundQuestion(u) => &mut u.meta,
        }
    }

    pub fn upri(&self) -> &Upri {
        &self.meta().upri
    }

    pub fn kind(&self) -> UnitKind {
        match self {
            SemanticUnit::Statement(_) => UnitKind::Statement,
            SemanticUnit::Compound(_) => UnitKind::Compound,
            SemanticUnit::Question(_) => UnitKind::Question,
            SemanticUnit::CompoundQuestion(_) => UnitKind::CompoundQuestion,
        }
    }

    pub fn is_deleted(&self) -> bool {
        self.meta().is_deleted()
    }

    pub fn as_statement(&self) -> Option<&StatementUnit> {
        match self {
            SemanticUnit::Statement(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_compound(&self) -> Option<&CompoundUnit> {
        match self {
            SemanticUnit::Compound(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_question(&self) -> Option<&QuestionUnit> {
        match self {
            SemanticUnit::Question(q) => Some(q),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionNode {
    pub upri: Upri,
    pub version_of: Upri,
    pub creator: Upri,
    pub creation_date: Timestamp,
    pub previous: Option<Upri>,
    pub content_id: Option<String>,
}
