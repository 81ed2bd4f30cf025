//! Lossless serializations of a [`Store`] and membership-query generation.
//!
//! All three codecs go through the flat records of [`crate::model::record`].

mod membership;
mod pg;
mod rdf;
mod tables;

use std::collections::{BTreeMap, BTreeSet};

pub use membership::{generate_membership_query, membership_kind, Dialect, MembershipKind};
pub use pg::{export_pg, import_pg, PgNode, PgRelationship, PropertyGraphDoc};
pub use rdf::{export_rdf, import_rdf, META_GRAPH_SUFFIX};
pub use tables::{export_tables, import_tables, Manifest, ManifestEntry, SemanticTables, TableRole};

use crate::model::record::AssembleError;
use crate::model::*;

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("TriG syntax error: {0}")]
    Syntax(String),
    #[error("schema mismatch in {record}: {detail}")]
    SchemaMismatch { record: String, detail: String },
    #[error(transparent)]
    Assemble(#[from] AssembleError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl BackendError {
    pub(crate) fn mismatch(record: impl std::fmt::Display, detail: impl Into<String>) -> Self {
        BackendError::SchemaMismatch { record: record.to_string(), detail: detail.into() }
    }
}

/// Compounds (lists separately) whose associated closure contains each statement unit.
pub(crate) fn compound_membership(store: &Store) -> BTreeMap<Upri, (BTreeSet<Upri>, BTreeSet<Upri>)> {
    let mut out: BTreeMap<Upri, (BTreeSet<Upri>, BTreeSet<Upri>)> = BTreeMap::new();
    for c in store.units.values().filter_map(SemanticUnit::as_compound) {
        let mut seen = BTreeSet::new();
        let mut queue: Vec<Upri> = c.associated.iter().cloned().collect();
        while let Some(next) = queue.pop() {
            if !seen.insert(next.clone()) {
                continue;
            }
            match store.unit(&next) {
                Some(SemanticUnit::Compound(inner)) => queue.extend(inner.associated.iter().cloned()),
                Some(SemanticUnit::Statement(_)) => {
                    let entry = out.entry(next).or_default();
                    if c.kind == CompoundKind::List {
                        entry.1.insert(c.meta.upri.clone());
                    } else {
                        entry.0.insert(c.meta.upri.clone());
                    }
                }
                _ => {}
            }
        }
    }
    out
}
