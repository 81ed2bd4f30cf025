//! Builds a statement KGBB class from the answers to the ten authoring questions.

use std::collections::{BTreeMap, BTreeSet};

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::sentence::{capitalize_first, Sentence, SentenceError};
use super::*;
use crate::model::{Datatype, LogicalProperty, ModelError, Upri};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum WizardType {
    Resource {
        #[serde(default)]
        class: Option<Upri>,
    },
    Literal {
        datatype: Datatype,
        #[serde(default)]
        min: Option<String>,
        #[serde(default)]
        max: Option<String>,
        #[serde(default)]
        pattern: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WizardPosition {
    /// Q5: thematic label.
    pub label: String,
    /// Q6.
    pub required: bool,
    /// Q7.
    #[serde(default)]
    pub description: String,
    /// Q8.
    pub value: WizardType,
    /// Q9.
    #[serde(default)]
    pub logical_properties: BTreeSet<LogicalProperty>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WizardAnswers {
    /// Namespace prefix for minted identifiers, e.g. `travel:`.
    pub namespace: String,
    /// Q1: the predicate, e.g. `travels`.
    pub predicate: String,
    /// Q2.
    #[serde(default)]
    pub description: String,
    /// Q3.
    #[serde(default)]
    pub examples: Vec<String>,
    /// Q4.
    pub position_count: usize,
    /// Q5 for the subject.
    pub subject_label: String,
    #[serde(default)]
    pub subject_class: Option<Upri>,
    pub positions: Vec<WizardPosition>,
    /// Q10: the label sentence, thematic labels written bare or in braces.
    pub label_sentence: String,
    /// Also emit contingent, prototypical, universal, assertional and negated readings.
    #[serde(default)]
    pub category_variants: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WizardError {
    #[error("expected {expected} object positions, got {got}")]
    PositionCountMismatch { expected: usize, got: usize },
    #[error("thematic label {0} is used in the label sentence but not declared")]
    UnknownThematicLabel(String),
    #[error("thematic label {0} is declared but missing from the label sentence")]
    MissingThematicLabel(String),
    #[error("thematic label {0} is declared more than once")]
    DuplicateThematicLabel(String),
    #[error(transparent)]
    Sentence(#[from] SentenceError),
    #[error(transparent)]
    Id(#[from] ModelError),
}

fn pascal(words: &str) -> String {
    words
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| capitalize_first(&w.to_lowercase()))
        .collect()
}

fn camel(words: &str) -> String {
    let p = pascal(words);
    let mut c = p.chars();
    match c.next() {
        Some(f) => f.to_lowercase().chain(c).collect(),
        None => p,
    }
}

pub fn build_statement_kgbb(a: &WizardAnswers) -> Result<StatementKgbbClass, WizardError> {
    if a.positions.len() != a.position_count {
        return Err(WizardError::PositionCountMismatch { expected: a.position_count, got: a.positions.len() });
    }
    let mut labels = BTreeSet::from([a.subject_label.clone()]);
    for p in &a.positions {
        if !labels.insert(p.label.clone()) {
            return Err(WizardError::DuplicateThematicLabel(p.label.clone()));
        }
    }
    let template = braced_sentence(&a.label_sentence, &labels)?;
    let sentence = Sentence::parse(&template)?;
    let used: BTreeSet<&str> = sentence.placeholders().into_iter().collect();
    for l in &labels {
        if !used.contains(l.as_str()) {
            return Err(WizardError::MissingThematicLabel(l.clone()));
        }
    }

    let stem = pascal(&a.predicate);
    let ns = &a.namespace;
    let positions = a
        .positions
        .iter()
        .map(|p| {
            let (object_type, constraint) = match &p.value {
                WizardType::Resource { class } => (ObjectType::Resource, PositionConstraint { class: class.clone(), ..Default::default() }),
                WizardType::Literal { datatype, min, max, pattern } => (
                    ObjectType::Literal,
                    PositionConstraint {
                        class: None,
                        datatype: Some(*datatype),
                        min: min.clone().map(FacetValue),
                        max: max.clone().map(FacetValue),
                        pattern: pattern.clone(),
                    },
                ),
            };
            Ok(ObjectPositionClass {
                id: Upri::new(format!("{ns}{}", camel(&p.label)))?,
                label: p.label.clone(),
                object_type,
                required: p.required,
                description: p.description.clone(),
                constraint,
                logical_properties: p.logical_properties.clone(),
                owl_property: None,
            })
        })
        .collect::<Result<Vec<_>, WizardError>>()?;

    let mut label_map = BTreeMap::from([(LabelVariant::Default, template)]);
    if a.category_variants {
        let determined: BTreeSet<String> =
            positions.iter().filter(|p| p.object_type == ObjectType::Resource).map(|p| p.label.clone()).collect();
        for v in [
            LabelVariant::Assertional,
            LabelVariant::Contingent,
            LabelVariant::Prototypical,
            LabelVariant::Universal,
            LabelVariant::Negated,
        ] {
            label_map.insert(v, sentence.variant(&a.subject_label, &determined, v)?.to_string());
        }
    }

    Ok(StatementKgbbClass {
        id: Upri::new(format!("{ns}{stem}StatementKGBB"))?,
        label: format!("{} statement", a.predicate),
        description: a.description.clone(),
        parent: None,
        manages: Upri::new(format!("{ns}{stem}StatementUnit"))?,
        predicate: Some(PredicateSpec {
            label: a.predicate.clone(),
            definition: a.description.clone(),
            iri: None,
            functional: false,
        }),
        subject: SubjectSpec { label: a.subject_label.clone(), class: a.subject_class.clone() },
        lexical: false,
        positions,
        labels: label_map,
        question: QuestionStyle::default(),
        mind_map: None,
        access_templates: Vec::new(),
        import_templates: Vec::new(),
        examples: a.examples.clone(),
    })
}

/// Rewrites bare upper-case thematic labels to `{LABEL}` placeholders.
fn braced_sentence(text: &str, labels: &BTreeSet<String>) -> Result<String, WizardError> {
    let token = Regex::new(r"\{([^{}]*)\}|\b[A-Z][A-Z0-9_]+\b").expect("static regex");
    let mut out = String::new();
    let mut last = 0;
    let mut seen = BTreeSet::new();
    for m in token.captures_iter(text) {
        let whole = m.get(0).unwrap();
        let name = m.get(1).map(|g| g.as_str().trim()).unwrap_or(whole.as_str());
        if !labels.contains(name) {
            return Err(WizardError::UnknownThematicLabel(name.to_string()));
        }
        if !seen.insert(name.to_string()) {
            return Err(WizardError::DuplicateThematicLabel(name.to_string()));
        }
        out.push_str(&text[last..whole.start()]);
        out.push('{');
        out.push_str(name);
        out.push('}');
        last = whole.end();
    }
    out.push_str(&text[last..]);
    Ok(out)
}
