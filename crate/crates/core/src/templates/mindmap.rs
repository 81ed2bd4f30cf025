use std::collections::BTreeSet;

use serde::Serialize;

use super::label::{display_input, display_resource};
use super::TemplateError;
use crate::model::*;
use crate::spec::Spec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Hub,
    Resource,
    Value,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MindMapNode {
    pub id: Upri,
    pub label: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MindMapEdge {
    pub source: Upri,
    pub target: Upri,
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MindMap {
    pub nodes: Vec<MindMapNode>,
    pub edges: Vec<MindMapEdge>,
}

impl MindMap {
    fn add_node(&mut self, n: MindMapNode) {
        if !self.nodes.iter().any(|m| m.id == n.id) {
            self.nodes.push(n);
        }
    }

    fn add_edge(&mut self, e: MindMapEdge) {
        if !self.edges.contains(&e) {
            self.edges.push(e);
        }
    }

    /// Union of two maps; nodes with the same identifier are merged.
    pub fn merge(&mut self, other: MindMap) {
        for n in other.nodes {
            self.add_node(n);
        }
        for e in other.edges {
            self.add_edge(e);
        }
    }

    pub fn node_ids(&self) -> BTreeSet<&Upri> {
        self.nodes.iter().map(|n| &n.id).collect()
    }
}

fn statement_map(store: &Store, spec: &Spec, s: &StatementUnit) -> MindMap {
    let class = spec.statement_class(&s.meta.kgbb_uri);
    let template = class.and_then(|c| c.mind_map.clone()).unwrap_or_default();
    let predicate = class.and_then(|c| c.predicate.as_ref()).map(|p| p.label.clone());
    let hub_label = template.hub.clone().or(predicate.clone()).unwrap_or_else(|| s.meta.label.clone());
    let mut map = MindMap::default();
    let subject = s.subject().clone();
    map.add_node(MindMapNode { id: subject.clone(), label: display_resource(store, spec, &subject), kind: NodeKind::Resource });
    let positions: Vec<&ObjectPositionInstance> = s.current_positions().collect();
    let object_node = |p: &ObjectPositionInstance| match &p.input {
        ObjectInput::Resource(r) => MindMapNode { id: r.clone(), label: display_resource(store, spec, r), kind: NodeKind::Resource },
        ObjectInput::Literal(_) => MindMapNode { id: p.upri.clone(), label: display_input(store, spec, &p.input), kind: NodeKind::Value },
    };
    let edge_label = |p: &ObjectPositionInstance| {
        template.edges.get(&p.position_class).cloned().unwrap_or_else(|| p.input_type_label.to_lowercase().replace('_', " "))
    };
    if positions.len() == 1 && template.hub.is_none() {
        let node = object_node(positions[0]);
        let label = predicate.unwrap_or_else(|| edge_label(positions[0]));
        map.add_edge(MindMapEdge { source: subject, target: node.id.clone(), label });
        map.add_node(node);
        return map;
    }
    let hub = s.meta.upri.clone();
    map.add_node(MindMapNode { id: hub.clone(), label: hub_label, kind: NodeKind::Hub });
    map.add_edge(MindMapEdge {
        source: subject,
        target: hub.clone(),
        label: template.subject_edge.clone().unwrap_or_else(|| "subject".into()),
    });
    for p in positions {
        let node = object_node(p);
        map.add_edge(MindMapEdge { source: hub.clone(), target: node.id.clone(), label: edge_label(p) });
        map.add_node(node);
    }
    map
}

/// Mind-map view of a unit; compounds merge the maps of their live members.
pub fn render_mind_map(store: &Store, spec: &Spec, unit: &Upri) -> Result<MindMap, TemplateError> {
    let u = store.unit(unit).ok_or_else(|| TemplateError::UnknownUnit(unit.clone()))?;
    match u {
        SemanticUnit::Statement(s) => Ok(statement_map(store, spec, s)),
        SemanticUnit::Compound(_) => {
            let mut map = MindMap::default();
            for id in crate::engine::associated_closure(store, unit) {
                if let Some(s) = store.statement(&id).filter(|s| !s.meta.is_deleted()) {
                    map.merge(statement_map(store, spec, s));
                }
            }
            Ok(map)
        }
        _ => Err(TemplateError::NotAStatement(unit.clone())),
    }
}
