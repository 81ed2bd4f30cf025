use std::collections::BTreeSet;

use serde::Serialize;

use super::*;
use crate::model::Upri;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormField {
    pub slot: Slot,
    pub label: String,
    pub description: String,
    /// `None` for the subject field.
    pub object_type: Option<ObjectType>,
    pub required: bool,
    pub constraint: PositionConstraint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestedForm {
    pub edge: EdgeKind,
    pub node: Upri,
    pub min_count: u32,
    pub max_count: u32,
    pub form: FormDescriptor,
}

/// Input form for creating a unit of one KGBB instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormDescriptor {
    pub kgbb_instance: Upri,
    pub kgbb_class: Upri,
    pub label: String,
    pub description: String,
    /// Absent when the subject is supplied by the cascade that reaches this form.
    pub subject: Option<FormField>,
    pub fields: Vec<FormField>,
    /// Units that must be created along with this one.
    pub nested: Vec<NestedForm>,
}

impl Spec {
    pub fn form(&self, instance: &Upri) -> Option<FormDescriptor> {
        self.form_inner(instance, true, &mut BTreeSet::new())
    }

    fn form_inner(&self, instance: &Upri, with_subject: bool, visiting: &mut BTreeSet<Upri>) -> Option<FormDescriptor> {
        let class = self.class_of_instance(instance)?;
        visiting.insert(instance.clone());
        let (description, subject, fields) = match class {
            KgbbClass::Statement(c) => {
                let subject = FormField {
                    slot: Slot::Subject,
                    label: c.subject.label.clone(),
                    description: String::new(),
                    object_type: None,
                    required: true,
                    constraint: PositionConstraint { class: c.subject.class.clone(), ..Default::default() },
                };
                let fields = c
                    .positions
                    .iter()
                    .map(|p| FormField {
                        slot: Slot::Position(p.id.clone()),
                        label: p.label.clone(),
                        description: p.description.clone(),
                        object_type: Some(p.object_type),
                        required: p.required,
                        constraint: p.constraint.clone(),
                    })
                    .collect();
                (c.description.clone(), Some(subject), fields)
            }
            KgbbClass::Compound(c) => {
                let subject = c.subject.as_ref().map(|s| FormField {
                    slot: Slot::Subject,
                    label: s.label.clone(),
                    description: String::new(),
                    object_type: None,
                    required: s.class.is_some(),
                    constraint: PositionConstraint { class: s.class.clone(), ..Default::default() },
                });
                (c.description.clone(), subject, Vec::new())
            }
        };
        let mut nested = Vec::new();
        for e in self.outgoing(instance) {
            if e.min_count == 0 || visiting.contains(e.target) {
                continue;
            }
            if let Some(form) = self.form_inner(e.target, false, visiting) {
                nested.push(NestedForm {
                    edge: e.kind,
                    node: e.id.clone(),
                    min_count: e.min_count,
                    max_count: e.max_count,
                    form,
                });
            }
        }
        visiting.remove(instance);
        Some(FormDescriptor {
            kgbb_instance: instance.clone(),
            kgbb_class: class.id().clone(),
            label: class.label().to_string(),
            description,
            subject: if with_subject { subject } else { None },
            fields,
            nested,
        })
    }
}
