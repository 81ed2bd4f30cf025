use serde::{Deserialize, Serialize};

use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Cypher,
    Sparql,
}

/// Which membership property identifies the unit's nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipKind {
    Statement,
    Compound,
    List,
    Version,
    Dataset,
}

impl MembershipKind {
    pub fn property(self) -> &'static str {
        match self {
            MembershipKind::Statement => "statementUnitURI",
            MembershipKind::Compound => "compoundUnitURI",
            MembershipKind::List => "listUnitURI",
            MembershipKind::Version => "versionID",
            MembershipKind::Dataset => "datasetUnitID",
        }
    }
}

/// Membership kind of a stored unit or version node; questions have none.
pub fn membership_kind(store: &Store, upri: &Upri) -> Option<MembershipKind> {
    if store.versions.contains_key(upri) {
        return Some(MembershipKind::Version);
    }
    match store.unit(upri)? {
        SemanticUnit::Statement(_) => Some(MembershipKind::Statement),
        SemanticUnit::Compound(c) => Some(match c.kind {
            CompoundKind::List => MembershipKind::List,
            CompoundKind::Dataset => MembershipKind::Dataset,
            _ => MembershipKind::Compound,
        }),
        _ => None,
    }
}

fn cypher_string(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn sparql_iri(u: &Upri) -> String {
    format!("<{}>", super::rdf::escape_iri(u.as_str()))
}

/// Query text selecting the current data-graph nodes that belong to a unit.
pub fn generate_membership_query(unit: &Upri, kind: MembershipKind, dialect: Dialect) -> String {
    match dialect {
        Dialect::Cypher => format!(
            "MATCH (n {{current_version:\"true\"}}) WHERE (\"{}\" IN n.{}) RETURN n",
            cypher_string(unit.as_str()),
            kind.property()
        ),
        Dialect::Sparql => {
            let x = sparql_iri(unit);
            let current = format!("?n <{}> true .", vocab::CURRENT_VERSION);
            let body = match kind {
                MembershipKind::Statement => format!("GRAPH {x} {{ {current} ?n ?p ?o . }}"),
                MembershipKind::Compound | MembershipKind::List => format!(
                    "GRAPH ?m {{ {x} <{}>+ ?u . }} GRAPH ?u {{ {current} ?n ?p ?o . }}",
                    vocab::HAS_ASSOCIATED_SEMANTIC_UNIT
                ),
                MembershipKind::Version => {
                    format!("GRAPH ?u {{ ?n <{}> {x} . {current} ?n ?p ?o . }}", vocab::VERSION_ID)
                }
                MembershipKind::Dataset => {
                    format!("GRAPH ?u {{ ?n <{}> {x} . {current} ?n ?p ?o . }}", vocab::DATASET_UNIT_ID)
                }
            };
            format!("SELECT ?n ?p ?o WHERE {{ {body} }}")
        }
    }
}
