use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::model::{CompoundKind, ContingentChoice, Datatype, LogicalProperty, ResourceKind, Upri};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplicationInfo {
    pub id: Upri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_license: Option<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_logical_framework: Option<Upri>,
    /// Pairs `[a, b]` meaning licence `a` is at most as restrictive as `b`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub license_order: Vec<[Upri; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologyClass {
    pub id: Upri,
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parents: Vec<Upri>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredicateSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub definition: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iri: Option<Upri>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub functional: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubjectSpec {
    #[serde(default = "default_subject_label")]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Upri>,
}

fn default_subject_label() -> String {
    "SUBJECT".into()
}

impl Default for SubjectSpec {
    fn default() -> Self {
        Self { label: default_subject_label(), class: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectType {
    Resource,
    Literal,
}

/// A facet bound such as `min: 0`; YAML numbers and strings are both accepted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FacetValue(pub String);

impl<'de> Deserialize<'de> for FacetValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
            F(f64),
        }
        Ok(FacetValue(match Raw::deserialize(d)? {
            Raw::S(s) => s,
            Raw::I(i) => i.to_string(),
            Raw::F(f) => f.to_string(),
        }))
    }
}

impl fmt::Display for FacetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionConstraint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datatype: Option<Datatype>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<FacetValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<FacetValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
}

impl PositionConstraint {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectPositionClass {
    pub id: Upri,
    /// Thematic label, used as placeholder name in templates.
    pub label: String,
    #[serde(rename = "type")]
    pub object_type: ObjectType,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub required: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "PositionConstraint::is_empty")]
    pub constraint: PositionConstraint,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub logical_properties: BTreeSet<LogicalProperty>,
    /// Overrides the derived OWL property name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owl_property: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelVariant {
    Default,
    Lexical,
    Assertional,
    Contingent,
    Prototypical,
    Universal,
    Negated,
}

impl LabelVariant {
    pub fn for_category(c: crate::model::Category) -> Self {
        use crate::model::Category as C;
        match c {
            C::Lexical => LabelVariant::Lexical,
            C::Assertional => LabelVariant::Assertional,
            C::Contingent => LabelVariant::Contingent,
            C::Prototypical => LabelVariant::Prototypical,
            C::Universal => LabelVariant::Universal,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuestionStyle {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auxiliary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<LabelVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<String>,
}

impl QuestionStyle {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MindMapTemplate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hub: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject_edge: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edges: BTreeMap<Upri, String>,
}

/// Where a template value comes from: the statement subject or an object position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Slot {
    Subject,
    Position(Upri),
}

impl TryFrom<String> for Slot {
    type Error = crate::model::ModelError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        if s == "SUBJECT" {
            Ok(Slot::Subject)
        } else {
            Upri::new(s).map(Slot::Position)
        }
    }
}

impl From<Slot> for String {
    fn from(s: Slot) -> Self {
        match s {
            Slot::Subject => "SUBJECT".into(),
            Slot::Position(p) => p.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccessFormat {
    GraphPattern,
    Owl,
    RdfOwl,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreshNodeRule {
    pub var: String,
    pub class: Upri,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessTemplate {
    pub id: Upri,
    pub family: String,
    pub format: AccessFormat,
    /// Triple patterns; `?name` terms are variables, quoted terms are string literals.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pattern: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fresh_nodes: Vec<FreshNodeRule>,
    /// Variable (graph formats) or column/key (tabular formats) to slot.
    pub mapping: Vec<(String, Slot)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logical_framework: Option<Upri>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub references: Vec<Upri>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curators: Vec<Upri>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImportTemplate {
    pub id: Upri,
    pub columns: Vec<(String, Slot)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<(Slot, String)>,
    #[serde(default = "named_individual")]
    pub subject_kind: ResourceKind,
    #[serde(default = "named_individual")]
    pub object_kind: ResourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category_choice: Option<ContingentChoice>,
}

fn named_individual() -> ResourceKind {
    ResourceKind::NamedIndividual
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatementKgbbClass {
    pub id: Upri,
    pub label: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<Upri>,
    pub manages: Upri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<PredicateSpec>,
    #[serde(default, alias = "subject_constraint")]
    pub subject: SubjectSpec,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub lexical: bool,
    #[serde(default)]
    pub positions: Vec<ObjectPositionClass>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    #[serde(alias = "dynamic_labels")]
    pub labels: BTreeMap<LabelVariant, String>,
    #[serde(default, skip_serializing_if = "QuestionStyle::is_empty")]
    pub question: QuestionStyle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mind_map: Option<MindMapTemplate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub access_templates: Vec<AccessTemplate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub import_templates: Vec<ImportTemplate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<String>,
}

impl StatementKgbbClass {
    pub fn position(&self, id: &Upri) -> Option<&ObjectPositionClass> {
        self.positions.iter().find(|p| &p.id == id)
    }

    pub fn position_by_label(&self, label: &str) -> Option<&ObjectPositionClass> {
        self.positions.iter().find(|p| p.label == label)
    }

    pub fn label_template(&self, variant: LabelVariant) -> Option<&str> {
        self.labels.get(&variant).or_else(|| self.labels.get(&LabelVariant::Default)).map(String::as_str)
    }

    /// Whether the predicate is functional, declared on the predicate or on any position.
    pub fn is_functional(&self) -> bool {
        self.predicate.as_ref().is_some_and(|p| p.functional)
            || self.positions.iter().any(|p| p.logical_properties.contains(&crate::model::LogicalProperty::Functional))
    }

    pub fn access_template(&self, id: &Upri) -> Option<&AccessTemplate> {
        self.access_templates.iter().find(|t| &t.id == id)
    }

    pub fn import_template(&self, id: &Upri) -> Option<&ImportTemplate> {
        self.import_templates.iter().find(|t| &t.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DisplaySection {
    Header { text: String },
    Association {
        node: Upri,
        title: String,
        /// Shown when no unit is associated through `node`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        placeholder: Option<String>,
    },
    Links { title: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisplayTemplate {
    pub id: Upri,
    pub sections: Vec<DisplaySection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompoundKgbbClass {
    pub id: Upri,
    pub label: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<Upri>,
    pub manages: Upri,
    pub compound_kind: CompoundKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    #[serde(alias = "subject_constraint")]
    pub subject: Option<SubjectSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub display_templates: Vec<DisplayTemplate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KgbbClass {
    Statement(StatementKgbbClass),
    Compound(CompoundKgbbClass),
}

impl KgbbClass {
    pub fn id(&self) -> &Upri {
        match self {
            KgbbClass::Statement(c) => &c.id,
            KgbbClass::Compound(c) => &c.id,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            KgbbClass::Statement(c) => &c.label,
            KgbbClass::Compound(c) => &c.label,
        }
    }

    pub fn parent(&self) -> Option<&Upri> {
        match self {
            KgbbClass::Statement(c) => c.parent.as_ref(),
            KgbbClass::Compound(c) => c.parent.as_ref(),
        }
    }

    pub fn manages(&self) -> &Upri {
        match self {
            KgbbClass::Statement(c) => &c.manages,
            KgbbClass::Compound(c) => &c.manages,
        }
    }

    pub fn as_statement(&self) -> Option<&StatementKgbbClass> {
        match self {
            KgbbClass::Statement(c) => Some(c),
            KgbbClass::Compound(_) => None,
        }
    }

    pub fn as_compound(&self) -> Option<&CompoundKgbbClass> {
        match self {
            KgbbClass::Compound(c) => Some(c),
            KgbbClass::Statement(_) => None,
        }
    }

    pub fn subject_class(&self) -> Option<&Upri> {
        match self {
            KgbbClass::Statement(c) => c.subject.class.as_ref(),
            KgbbClass::Compound(c) => c.subject.as_ref().and_then(|s| s.class.as_ref()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KgbbInstance {
    pub id: Upri,
    pub class: Upri,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssociationNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<Upri>,
    pub source: Upri,
    pub target: Upri,
    #[serde(default)]
    pub min_count: u32,
    /// 0 means unlimited.
    #[serde(default)]
    pub max_count: u32,
    /// Positions of the target statement whose range is narrowed to the compound's subject class.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub carry_over: Vec<Upri>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<Upri>,
    pub source: Upri,
    pub target: Upri,
    pub use_as_subject: Upri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub if_object: Option<Upri>,
    #[serde(default)]
    pub min_count: u32,
    #[serde(default)]
    pub max_count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<Upri>,
    pub source: Upri,
    pub target: Upri,
    #[serde(default)]
    pub min_count: u32,
    #[serde(default)]
    pub max_count: u32,
}

/// Authored form of a specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub application: ApplicationInfo,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ontology: Vec<OntologyClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<KgbbClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub instances: Vec<KgbbInstance>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub associations: Vec<AssociationNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<LinkNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub references: Vec<ReferenceNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub starting_points: Vec<Upri>,
}

/// Which kind of specification-graph edge a cascade follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Association,
    Link,
    Reference,
}

/// Uniform view of association, link and reference nodes.
#[derive(Debug, Clone, Copy)]
pub struct Edge<'a> {
    pub kind: EdgeKind,
    pub id: &'a Upri,
    pub source: &'a Upri,
    pub target: &'a Upri,
    pub min_count: u32,
    pub max_count: u32,
}

impl Edge<'_> {
    pub fn admits(&self, count: usize) -> bool {
        self.max_count == 0 || count <= self.max_count as usize
    }
}
