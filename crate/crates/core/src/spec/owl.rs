//! OWL property axioms derived from statement KGBB classes.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::sentence::{capitalize_first, is_article, Segment, Sentence, SentenceError};
use super::*;
use crate::model::{vocab, Datatype, LogicalProperty, PositionLink, Upri};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OwlPropertyKind {
    Object,
    Datatype,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OwlProperty {
    pub iri: Upri,
    pub name: String,
    pub kind: OwlPropertyKind,
    pub sub_property_of: PositionLink,
    pub domain: Option<Upri>,
    pub range: Option<Upri>,
    pub characteristics: BTreeSet<LogicalProperty>,
    pub position: Upri,
}

/// One property per object position, named after the verb and the position's connective.
pub fn derive_owl(class: &StatementKgbbClass) -> Result<Vec<OwlProperty>, SentenceError> {
    let names = property_names(class)?;
    let ns = class.id.namespace().to_string();
    let functional = class.predicate.as_ref().is_some_and(|p| p.functional);
    class
        .positions
        .iter()
        .zip(names)
        .map(|(p, derived)| {
            let name = p.owl_property.clone().unwrap_or(derived);
            let (kind, range) = match p.object_type {
                ObjectType::Resource => (OwlPropertyKind::Object, p.constraint.class.clone()),
                ObjectType::Literal => (
                    OwlPropertyKind::Datatype,
                    Some(Upri::from_static(p.constraint.datatype.unwrap_or(Datatype::String).xsd_iri())),
                ),
            };
            let mut characteristics = p.logical_properties.clone();
            if functional {
                characteristics.insert(LogicalProperty::Functional);
            }
            Ok(OwlProperty {
                iri: Upri::new(format!("{ns}{name}")).map_err(|_| SentenceError::NoVerb(name.clone()))?,
                name,
                kind,
                sub_property_of: if p.required { PositionLink::Required } else { PositionLink::Optional },
                domain: class.subject.class.clone(),
                range,
                characteristics,
                position: p.id.clone(),
            })
        })
        .collect()
}

fn property_names(class: &StatementKgbbClass) -> Result<Vec<String>, SentenceError> {
    let fallback_verb = class.predicate.as_ref().map(|p| p.label.clone()).unwrap_or_else(|| "has".into());
    let Some(text) = class.labels.get(&LabelVariant::Default) else {
        return Ok(class
            .positions
            .iter()
            .map(|p| join_camel(&[fallback_verb.as_str(), &p.label.to_lowercase().replace('_', " ")]))
            .collect());
    };
    let sentence = Sentence::parse(text)?;
    let subject = class.subject.label.as_str();
    let verb = sentence.verb(subject).ok_or_else(|| SentenceError::NoVerb(text.clone()))?;
    let mut connective: Vec<(String, String)> = Vec::new();
    let mut before = String::new();
    let mut seen_subject = false;
    for seg in &sentence.segments {
        match seg {
            Segment::Text(t) => before.push_str(t),
            Segment::Placeholder(p) => {
                if !seen_subject && p == subject {
                    seen_subject = true;
                } else {
                    connective.push((p.clone(), std::mem::take(&mut before)));
                }
                before.clear();
            }
        }
    }
    Ok(class
        .positions
        .iter()
        .map(|p| {
            let words: Vec<&str> = connective
                .iter()
                .find(|(l, _)| l == &p.label)
                .map(|(_, t)| t.split_whitespace().filter(|w| !is_article(w) && *w != verb).collect())
                .unwrap_or_default();
            let mut all = vec![verb.as_str()];
            all.extend(words);
            join_camel(&all)
        })
        .collect())
}

fn join_camel(words: &[&str]) -> String {
    let mut out = String::new();
    for (i, w) in words.iter().flat_map(|w| w.split_whitespace()).enumerate() {
        if i == 0 {
            out.push_str(&w.to_lowercase());
        } else {
            out.push_str(&capitalize_first(&w.to_lowercase()));
        }
    }
    out
}

/// Renders derived properties as Turtle.
pub fn owl_to_turtle(props: &[OwlProperty]) -> String {
    let mut out = String::new();
    for p in props {
        let kind = match p.kind {
            OwlPropertyKind::Object => vocab::OWL_OBJECT_PROPERTY,
            OwlPropertyKind::Datatype => vocab::OWL_DATATYPE_PROPERTY,
        };
        let _ = writeln!(out, "<{}> <{}> <{kind}> ;", p.iri, vocab::RDF_TYPE);
        let _ = writeln!(out, "    <{}> <{}> ;", vocab::RDFS_SUBPROPERTY_OF, p.sub_property_of.predicate());
        for c in &p.characteristics {
            let iri = match c {
                LogicalProperty::Transitive => vocab::OWL_TRANSITIVE,
                LogicalProperty::Symmetric => vocab::OWL_SYMMETRIC,
                LogicalProperty::Asymmetric => vocab::OWL_ASYMMETRIC,
                LogicalProperty::Functional => vocab::OWL_FUNCTIONAL,
            };
            let _ = writeln!(out, "    <{}> <{iri}> ;", vocab::RDF_TYPE);
        }
        if let Some(d) = &p.domain {
            let _ = writeln!(out, "    <{}> <{d}> ;", vocab::RDFS_DOMAIN);
        }
        if let Some(r) = &p.range {
            let _ = writeln!(out, "    <{}> <{r}> ;", vocab::RDFS_RANGE);
        }
        let _ = writeln!(out, "    <{}> \"{}\" .", vocab::RDFS_LABEL, p.name);
    }
    out
}

/// An access template that writes each bound position with its derived OWL property.
pub fn derive_owl_access_template(class: &StatementKgbbClass) -> Result<AccessTemplate, SentenceError> {
    let props = derive_owl(class)?;
    let subject = "?subject".to_string();
    let var = |p: &OwlProperty| format!("?{}", p.position.local_name());
    Ok(AccessTemplate {
        id: Upri::new(format!("{}#owl", class.id)).map_err(|_| SentenceError::NoVerb(class.id.to_string()))?,
        family: "owl".into(),
        format: AccessFormat::Owl,
        pattern: props.iter().map(|p| [subject.clone(), p.iri.to_string(), var(p)]).collect(),
        fresh_nodes: Vec::new(),
        mapping: std::iter::once((subject.clone(), Slot::Subject))
            .chain(props.iter().map(|p| (var(p), Slot::Position(p.position.clone()))))
            .collect(),
        logical_framework: None,
        references: Vec::new(),
        curators: Vec::new(),
    })
}
