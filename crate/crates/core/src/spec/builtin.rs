//! Identification KGBBs the engine uses to record a resource's class and label.

use std::collections::BTreeMap;

use super::*;
use crate::model::{vocab, Datatype, ResourceKind, Upri};

pub const RESOURCE_LABEL: &str = "RESOURCE";

pub fn identification_instance(kind: ResourceKind) -> Option<Upri> {
    let id = match kind {
        ResourceKind::NamedIndividual => vocab::TYPE_IDENTIFICATION,
        ResourceKind::SomeInstance => vocab::SOME_INSTANCE_IDENTIFICATION,
        ResourceKind::EveryInstance => vocab::EVERY_INSTANCE_IDENTIFICATION,
        ResourceKind::Class | ResourceKind::Property => return None,
    };
    Some(Upri::from_static(id))
}

pub fn is_identification_instance(instance: &Upri) -> bool {
    [vocab::TYPE_IDENTIFICATION, vocab::SOME_INSTANCE_IDENTIFICATION, vocab::EVERY_INSTANCE_IDENTIFICATION]
        .contains(&instance.as_str())
}

pub fn identified_class_position() -> Upri {
    Upri::from_static(vocab::IDENTIFIED_CLASS)
}

pub fn identified_label_position() -> Upri {
    Upri::from_static(vocab::IDENTIFIED_LABEL)
}

pub(super) fn builtin_classes() -> Vec<(KgbbInstance, KgbbClass)> {
    let spec = [
        (vocab::TYPE_IDENTIFICATION, vocab::TYPE_IDENTIFICATION_KGBB, vocab::TYPE_IDENTIFICATION_UNIT, "type identification", "is a"),
        (
            vocab::SOME_INSTANCE_IDENTIFICATION,
            vocab::SOME_INSTANCE_IDENTIFICATION_KGBB,
            vocab::SOME_INSTANCE_IDENTIFICATION_UNIT,
            "some-instance identification",
            "is some instance of",
        ),
        (
            vocab::EVERY_INSTANCE_IDENTIFICATION,
            vocab::EVERY_INSTANCE_IDENTIFICATION_KGBB,
            vocab::EVERY_INSTANCE_IDENTIFICATION_UNIT,
            "every-instance identification",
            "is every instance of",
        ),
    ];
    spec.into_iter()
        .map(|(inst, class, manages, label, phrase)| {
            let class = StatementKgbbClass {
                id: Upri::from_static(class),
                label: label.into(),
                description: String::new(),
                parent: None,
                manages: Upri::from_static(manages),
                predicate: Some(PredicateSpec {
                    label: phrase.into(),
                    definition: String::new(),
                    iri: None,
                    functional: false,
                }),
                subject: SubjectSpec { label: RESOURCE_LABEL.into(), class: None },
                lexical: false,
                positions: vec![
                    ObjectPositionClass {
                        id: identified_class_position(),
                        label: "CLASS".into(),
                        object_type: ObjectType::Resource,
                        required: true,
                        description: String::new(),
                        constraint: PositionConstraint::default(),
                        logical_properties: Default::default(),
                        owl_property: None,
                    },
                    ObjectPositionClass {
                        id: identified_label_position(),
                        label: "LABEL".into(),
                        object_type: ObjectType::Literal,
                        required: false,
                        description: String::new(),
                        constraint: PositionConstraint { datatype: Some(Datatype::String), ..Default::default() },
                        logical_properties: Default::default(),
                        owl_property: None,
                    },
                ],
                labels: BTreeMap::from([(LabelVariant::Default, format!("{{{RESOURCE_LABEL}}} {phrase} {{CLASS}}"))]),
                question: QuestionStyle::default(),
                mind_map: None,
                access_templates: Vec::new(),
                import_templates: Vec::new(),
                examples: Vec::new(),
            };
            (KgbbInstance { id: Upri::from_static(inst), class: class.id.clone() }, KgbbClass::Statement(class))
        })
        .collect()
}
