use std::fmt;

use serde::{Deserialize, Serialize};

use super::{vocab, ModelError, Upri};

/// How a resource refers to the world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResourceKind {
    NamedIndividual,
    SomeInstance,
    EveryInstance,
    Class,
    Property,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 5] = [
        ResourceKind::NamedIndividual,
        ResourceKind::SomeInstance,
        ResourceKind::EveryInstance,
        ResourceKind::Class,
        ResourceKind::Property,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ResourceKind::NamedIndividual => "named-individual",
            ResourceKind::SomeInstance => "some-instance",
            ResourceKind::EveryInstance => "every-instance",
            ResourceKind::Class => "class",
            ResourceKind::Property => "property",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Predicate linking a resource of this kind to its class.
    pub fn affiliation_predicate(self) -> Option<&'static str> {
        match self {
            ResourceKind::NamedIndividual => Some(vocab::RDF_TYPE),
            ResourceKind::SomeInstance => Some(vocab::SOME_INSTANCE_OF),
            ResourceKind::EveryInstance => Some(vocab::EVERY_INSTANCE_OF),
            ResourceKind::Class | ResourceKind::Property => None,
        }
    }

    pub fn requires_class_affiliation(self) -> bool {
        self.affiliation_predicate().is_some()
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub upri: Upri,
    pub kind: ResourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_affiliation: Option<Upri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Resource {
    pub fn new(
        upri: Upri,
        kind: ResourceKind,
        class_affiliation: Option<Upri>,
        label: Option<String>,
    ) -> Result<Self, ModelError> {
        if kind.requires_class_affiliation() && class_affiliation.is_none() {
            return Err(ModelError::MissingClassAffiliation { resource: upri, kind });
        }
        let label = label.filter(|l| !l.is_empty());
        Ok(Self { upri, kind, class_affiliation, label })
    }

    pub fn display_label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.upri.as_str())
    }
}
