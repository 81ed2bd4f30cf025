use serde::Serialize;

use super::label::{display_resource, render_unit_label};
use super::TemplateError;
use crate::model::*;
use crate::spec::sentence::Sentence;
use crate::spec::{DisplaySection, Spec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedUnit {
    pub upri: Upri,
    pub kgbb: Upri,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RenderedSection {
    Header { text: String },
    Association { title: String, node: Upri, units: Vec<RenderedUnit>, placeholder: Option<String> },
    Links { title: String, units: Vec<RenderedUnit> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisplayDocument {
    pub unit: Upri,
    pub template: Option<Upri>,
    pub sections: Vec<RenderedSection>,
}

fn rendered(store: &Store, spec: &Spec, id: &Upri) -> Result<RenderedUnit, TemplateError> {
    let u = store.unit(id).ok_or_else(|| TemplateError::UnknownUnit(id.clone()))?;
    Ok(RenderedUnit { upri: id.clone(), kgbb: u.meta().kgbb_uri.clone(), label: render_unit_label(store, spec, id)? })
}

/// Renders a compound through a display template, or a default layout when the class has none.
pub fn render_compound_display(store: &Store, spec: &Spec, unit: &Upri, template: Option<&Upri>) -> Result<DisplayDocument, TemplateError> {
    let Some(SemanticUnit::Compound(c)) = store.unit(unit) else {
        return Err(TemplateError::NotACompound(unit.clone()));
    };
    let class = spec.compound_class(&c.meta.kgbb_uri).ok_or_else(|| TemplateError::UnknownKgbb(c.meta.kgbb_uri.clone()))?;
    let chosen = match template {
        Some(id) => Some(class.display_templates.iter().find(|t| &t.id == id).ok_or_else(|| TemplateError::UnknownTemplate(id.clone()))?),
        None => class.display_templates.first(),
    };
    let default_sections;
    let sections = match chosen {
        Some(t) => &t.sections,
        None => {
            let mut s = vec![DisplaySection::Header { text: format!("{} {{SUBJECT}}", class.label) }];
            for n in spec.associations.iter().filter(|n| n.source == c.meta.kgbb_uri) {
                s.push(DisplaySection::Association {
                    node: n.id.clone().expect("ids are assigned at load"),
                    title: spec.class_of_instance(&n.target).map(|k| k.label().to_string()).unwrap_or_default(),
                    placeholder: None,
                });
            }
            s.push(DisplaySection::Links { title: "Linked units".into() });
            default_sections = s;
            &default_sections
        }
    };
    let members: Vec<&Upri> = {
        let mut m: Vec<&Upri> = c.member_order.iter().collect();
        m.extend(c.associated.iter().filter(|a| !c.member_order.contains(a)));
        m.into_iter().filter(|id| store.unit(id).is_some_and(|u| !u.is_deleted())).collect()
    };
    let subject = c.meta.subject.as_ref().map(|s| display_resource(store, spec, s)).unwrap_or_default();
    let mut out = Vec::new();
    for section in sections {
        out.push(match section {
            DisplaySection::Header { text } => {
                let sentence = Sentence::parse(text)?;
                let values = [("SUBJECT".to_string(), subject.clone())].into_iter().collect();
                RenderedSection::Header { text: super::label::fill(&sentence, &values, &Default::default())? }
            }
            DisplaySection::Association { node, title, placeholder } => {
                let n = spec.association(node).ok_or_else(|| TemplateError::UnknownTarget(node.clone()))?;
                let mut units = Vec::new();
                for m in members.iter().filter(|m| store.unit(m).is_some_and(|u| u.meta().kgbb_uri == n.target)) {
                    units.push(rendered(store, spec, m)?);
                }
                let placeholder = if units.is_empty() {
                    Some(placeholder.clone().unwrap_or_else(|| format!("No {} yet", title.to_lowercase())))
                } else {
                    None
                };
                RenderedSection::Association { title: title.clone(), node: node.clone(), units, placeholder }
            }
            DisplaySection::Links { title } => {
                let mut units = Vec::new();
                for l in c.linked.iter().filter(|l| store.unit(l).is_some_and(|u| !u.is_deleted())) {
                    units.push(rendered(store, spec, l)?);
                }
                RenderedSection::Links { title: title.clone(), units }
            }
        });
    }
    Ok(DisplayDocument { unit: unit.clone(), template: chosen.map(|t| t.id.clone()), sections: out })
}
