//! KGBB specifications: classes, instances, the specification graph and the checks
//! that keep them coherent.

mod builtin;
mod form;
mod load;
mod ontology;
mod owl;
pub mod sentence;
mod types;
mod validate;
mod wizard;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use builtin::{
    identification_instance, identified_class_position, identified_label_position, is_identification_instance,
    RESOURCE_LABEL,
};
pub use form::{FormDescriptor, FormField, NestedForm};
pub use ontology::Ontology;
pub use owl::{derive_owl, derive_owl_access_template, owl_to_turtle, OwlProperty, OwlPropertyKind};
pub use types::*;
pub use wizard::{build_statement_kgbb, WizardAnswers, WizardError, WizardPosition, WizardType};

use crate::model::{ModelError, Upri};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiagnosticCode {
    ParseError,
    DuplicateIdentifier,
    DanglingReference,
    TaxonomyCycle,
    ParentKindMismatch,
    ConstraintWidening,
    InvalidPosition,
    InvalidFacet,
    InvalidTemplate,
    UnknownPlaceholder,
    AssociationSourceNotCompound,
    LinkLinkingNotStatement,
    ReferenceTargetNotStatement,
    LinkUseAsSubjectNotResourcePosition,
    FunctionalTargetMaxCount,
    MinExceedsMax,
    UndeclaredStartingPoint,
    CarryOverInvalid,
    UnmappedRequiredPosition,
    UnknownTemplateSlot,
    UnboundPatternVariable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, node: impl fmt::Display, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), node: Some(node.to_string()) }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Some(n) => write!(f, "{:?} at {n}: {}", self.code, self.message),
            None => write!(f, "{:?}: {}", self.code, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid specification: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl SpecError {
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            SpecError::Parse { line, column, message } => vec![Diagnostic {
                code: DiagnosticCode::ParseError,
                message: message.clone(),
                node: Some(format!("line {line}, column {column}")),
            }],
            SpecError::Invalid(d) => d.clone(),
            SpecError::Model(e) => vec![Diagnostic { code: DiagnosticCode::InvalidPosition, message: e.to_string(), node: None }],
        }
    }
}

/// A loaded, inheritance-resolved and validated specification.
#[derive(Debug, Clone, Serialize)]
pub struct Spec {
    pub application: ApplicationInfo,
    pub ontology: Ontology,
    pub classes: BTreeMap<Upri, KgbbClass>,
    /// KGBB instance to its class.
    pub instances: BTreeMap<Upri, Upri>,
    pub associations: Vec<AssociationNode>,
    pub links: Vec<LinkNode>,
    pub references: Vec<ReferenceNode>,
    pub starting_points: Vec<Upri>,
    #[serde(skip)]
    reachable: BTreeSet<Upri>,
    #[serde(skip)]
    authored: BTreeSet<Upri>,
}

impl Spec {
    /// Parses, resolves and validates a YAML specification.
    pub fn from_yaml(text: &str) -> Result<Self, SpecError> {
        let spec = load::load(text)?;
        let diags = validate::validate(&spec);
        if diags.is_empty() {
            Ok(spec)
        } else {
            Err(SpecError::Invalid(diags))
        }
    }

    pub fn class(&self, id: &Upri) -> Option<&KgbbClass> {
        self.classes.get(id)
    }

    pub fn class_of_instance(&self, instance: &Upri) -> Option<&KgbbClass> {
        self.instances.get(instance).and_then(|c| self.classes.get(c))
    }

    pub fn statement_class(&self, instance: &Upri) -> Option<&StatementKgbbClass> {
        self.class_of_instance(instance).and_then(KgbbClass::as_statement)
    }

    pub fn compound_class(&self, instance: &Upri) -> Option<&CompoundKgbbClass> {
        self.class_of_instance(instance).and_then(KgbbClass::as_compound)
    }

    /// Instances whose class is authored in the specification (not built in).
    pub fn authored_instances(&self) -> impl Iterator<Item = (&Upri, &Upri)> {
        self.instances.iter().filter(|(i, _)| self.authored.contains(*i))
    }

    pub fn edges(&self) -> Vec<Edge<'_>> {
        let a = self.associations.iter().map(|n| Edge {
            kind: EdgeKind::Association,
            id: n.id.as_ref().expect("ids are assigned at load"),
            source: &n.source,
            target: &n.target,
            min_count: n.min_count,
            max_count: n.max_count,
        });
        let l = self.links.iter().map(|n| Edge {
            kind: EdgeKind::Link,
            id: n.id.as_ref().expect("ids are assigned at load"),
            source: &n.source,
            target: &n.target,
            min_count: n.min_count,
            max_count: n.max_count,
        });
        let r = self.references.iter().map(|n| Edge {
            kind: EdgeKind::Reference,
            id: n.id.as_ref().expect("ids are assigned at load"),
            source: &n.source,
            target: &n.target,
            min_count: n.min_count,
            max_count: n.max_count,
        });
        a.chain(l).chain(r).collect()
    }

    pub fn outgoing(&self, source: &Upri) -> Vec<Edge<'_>> {
        self.edges().into_iter().filter(|e| e.source == source).collect()
    }

    pub fn association(&self, id: &Upri) -> Option<&AssociationNode> {
        self.associations.iter().find(|n| n.id.as_ref() == Some(id))
    }

    pub fn link(&self, id: &Upri) -> Option<&LinkNode> {
        self.links.iter().find(|n| n.id.as_ref() == Some(id))
    }

    pub fn reference(&self, id: &Upri) -> Option<&ReferenceNode> {
        self.references.iter().find(|n| n.id.as_ref() == Some(id))
    }

    /// Whether an instance can be reached from a starting point through the specification graph.
    pub fn is_reachable(&self, instance: &Upri) -> bool {
        self.reachable.contains(instance)
    }

    pub fn is_starting_point(&self, instance: &Upri) -> bool {
        self.starting_points.contains(instance)
    }

    /// The authored specification as YAML, without built-in classes.
    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(&self.to_document()).expect("specification serializes")
    }

    pub fn to_document(&self) -> SpecDocument {
        SpecDocument {
            application: self.application.clone(),
            ontology: self.ontology.classes().cloned().collect(),
            classes: self.classes.values().filter(|c| self.authored.contains(c.id())).cloned().collect(),
            instances: self
                .authored_instances()
                .map(|(i, c)| KgbbInstance { id: i.clone(), class: c.clone() })
                .collect(),
            associations: self.associations.clone(),
            links: self.links.clone(),
            references: self.references.clone(),
            starting_points: self.starting_points.clone(),
        }
    }

    /// Label of an ontology class, falling back to its local name.
    pub fn class_label(&self, class: &Upri) -> String {
        self.ontology.label(class).map(str::to_string).unwrap_or_else(|| class.local_name().to_string())
    }
}

/// Loads and validates a specification text, returning every problem found.
pub fn check_spec_document(text: &str) -> Vec<Diagnostic> {
    match load::load(text) {
        Ok(spec) => validate::validate(&spec),
        Err(e) => e.diagnostics(),
    }
}
