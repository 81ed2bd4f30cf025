use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Resource, SemanticUnit, StatementUnit, Triple, Upri, VersionNode};

/// All persisted state: semantic units (with their data graphs), version nodes and
/// the resources they mention.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Store {
    pub units: BTreeMap<Upri, SemanticUnit>,
    pub versions: BTreeMap<Upri, VersionNode>,
    pub resources: BTreeMap<Upri, Resource>,
}

impl Store {
    pub fn unit(&self, upri: &Upri) -> Option<&SemanticUnit> {
        self.units.get(upri)
    }

    pub fn statement(&self, upri: &Upri) -> Option<&StatementUnit> {
        self.units.get(upri).and_then(SemanticUnit::as_statement)
    }

    pub fn statements(&self) -> impl Iterator<Item = &StatementUnit> {
        self.units.values().filter_map(SemanticUnit::as_statement)
    }

    pub fn live_statements(&self) -> impl Iterator<Item = &StatementUnit> {
        self.statements().filter(|s| !s.meta.is_deleted())
    }

    pub fn resource(&self, upri: &Upri) -> Option<&Resource> {
        self.resources.get(upri)
    }

    /// Human-readable label for any identifier in the store.
    pub fn label_of(&self, upri: &Upri) -> String {
        if let Some(r) = self.resources.get(upri) {
            return r.display_label().to_string();
        }
        if let Some(u) = self.units.get(upri) {
            return u.meta().label.clone();
        }
        upri.to_string()
    }

    /// Union of all statement units' data graphs.
    pub fn data_graph_layer(&self) -> Vec<Triple> {
        self.statements().flat_map(StatementUnit::data_graph).collect()
    }

    /// Version nodes of one unit ordered oldest first.
    pub fn version_chain(&self, unit: &Upri) -> Vec<&VersionNode> {
        let mut chain: Vec<&VersionNode> = self.versions.values().filter(|v| &v.version_of == unit).collect();
        chain.sort_by(|a, b| a.creation_date.cmp(&b.creation_date).then_with(|| a.upri.cmp(&b.upri)));
        chain
    }

    /// Units that list `unit` as associated or linked.
    pub fn parents_of(&self, unit: &Upri) -> BTreeSet<Upri> {
        self.units
            .values()
            .filter_map(SemanticUnit::as_compound)
            .filter(|c| c.associated.contains(unit) || c.linked.contains(unit))
            .map(|c| c.meta.upri.clone())
            .collect()
    }
}
