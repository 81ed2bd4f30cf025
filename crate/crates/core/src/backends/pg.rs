//! Labeled property graph codec (PG-JSON document form).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{compound_membership, BackendError};
use crate::model::record::*;
use crate::model::*;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgNode {
    pub id: String,
    pub labels: Vec<String>,
    pub properties: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgRelationship {
    pub start: String,
    pub end: String,
    #[serde(rename = "type")]
    pub rel_type: String,
    pub properties: Map<String, Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyGraphDoc {
    pub nodes: Vec<PgNode>,
    pub relationships: Vec<PgRelationship>,
}

pub const SEMANTIC_UNIT: &str = "SemanticUnit";
pub const OBJECT_POSITION: &str = "ObjectPosition";
pub const VERSION: &str = "Version";
pub const RESOURCE: &str = "Resource";
/// Endpoint of a relationship that is not itself stored (ontology classes, literals).
pub const REFERENCE: &str = "Reference";
pub const LITERAL_NODE: &str = "Literal";

fn unit_label(kind: &str) -> &'static str {
    match kind {
        "statement" => "StatementUnit",
        "compound" => "CompoundUnit",
        "question" => "QuestionUnit",
        _ => "CompoundQuestionUnit",
    }
}

fn encode(value: &FieldValue) -> Value {
    match value {
        FieldValue::Iri(u) => json!(u),
        FieldValue::IriSet(s) => json!(s),
        FieldValue::IriList(l) => json!(l),
        FieldValue::Text(t) => json!(t),
        FieldValue::Bool(b) => json!(b),
        FieldValue::Time(t) => json!(t.to_string()),
        FieldValue::Json(j) => j.clone(),
        FieldValue::Literal(l) => serde_json::to_value(l).expect("literals serialize"),
    }
}

fn decode(def: &FieldDef, id: &str, v: &Value) -> Result<FieldValue, BackendError> {
    let bad = |d: String| BackendError::mismatch(id, format!("{}: {d}", def.name));
    let text = || v.as_str().ok_or_else(|| bad(format!("expected a string, got {v}")));
    let iri = |s: &str| Upri::new(s).map_err(|e| bad(e.to_string()));
    Ok(match def.ty {
        FieldType::Iri => FieldValue::Iri(iri(text()?)?),
        FieldType::IriSet | FieldType::IriList => {
            let items = v.as_array().ok_or_else(|| bad(format!("expected an array, got {v}")))?;
            let list = items
                .iter()
                .map(|i| i.as_str().ok_or_else(|| bad(format!("expected a string, got {i}"))).and_then(iri))
                .collect::<Result<Vec<_>, _>>()?;
            if def.ty == FieldType::IriSet {
                FieldValue::IriSet(list.into_iter().collect())
            } else {
                FieldValue::IriList(list)
            }
        }
        FieldType::Text => FieldValue::Text(text()?.to_string()),
        FieldType::Bool => match v {
            Value::Bool(b) => FieldValue::Bool(*b),
            Value::String(s) if s == "true" || s == "false" => FieldValue::Bool(s == "true"),
            _ => return Err(bad(format!("expected a flag, got {v}"))),
        },
        FieldType::Time => FieldValue::Time(Timestamp::parse(text()?).map_err(|e| bad(e.to_string()))?),
        FieldType::Json => FieldValue::Json(v.clone()),
        FieldType::Literal => FieldValue::Literal(serde_json::from_value(v.clone()).map_err(|e| bad(e.to_string()))?),
    })
}

fn properties(schema: &[FieldDef], record: &Record, skip: &[&str]) -> Map<String, Value> {
    record
        .iter()
        .filter(|(k, _)| **k != KEY && !skip.contains(k) && field(schema, k).is_some())
        .map(|(k, v)| (k.to_string(), encode(v)))
        .collect()
}

fn membership(
    p: &ObjectPositionInstance,
    owner: &Upri,
    compounds: &BTreeMap<Upri, (BTreeSet<Upri>, BTreeSet<Upri>)>,
) -> Map<String, Value> {
    let (c, l) = compounds.get(owner).cloned().unwrap_or_default();
    let mut m = Map::new();
    m.insert("statementUnitURI".into(), json!([owner]));
    m.insert("compoundUnitURI".into(), json!(c));
    m.insert("listUnitURI".into(), json!(l));
    m.insert("versionID".into(), json!(p.version_ids));
    m.insert("datasetUnitID".into(), json!(p.dataset_unit_ids));
    m.insert("current_version".into(), json!(if p.current_version { "true" } else { "false" }));
    m
}

/// Exports the store as a property graph; nodes and relationships are sorted by identifier.
pub fn export_pg(store: &Store) -> PropertyGraphDoc {
    let compounds = compound_membership(store);
    let mut nodes: BTreeMap<String, PgNode> = BTreeMap::new();
    let mut rels = Vec::new();
    for u in store.units.values() {
        let r = unit_to_record(u);
        let id = u.upri().to_string();
        let labels = vec![SEMANTIC_UNIT.to_string(), unit_label(u.kind().as_str()).to_string()];
        nodes.insert(id.clone(), PgNode { id, labels, properties: properties(UNIT_FIELDS, &r, &[]) });
    }
    for s in store.statements() {
        for p in s.positions.values() {
            let r = position_to_record(&s.meta.upri, p);
            let member = membership(p, &s.meta.upri, &compounds);
            let mut props = properties(POSITION_FIELDS, &r, &[OWNER, LINK, "current_version", "version_ids", "dataset_unit_ids"]);
            props.extend(member.clone());
            let id = p.upri.to_string();
            nodes.insert(id.clone(), PgNode { id: id.clone(), labels: vec![OBJECT_POSITION.into()], properties: props });
            let link = match p.link {
                PositionLink::Required => "requiredObjectPosition",
                PositionLink::Optional => "optionalObjectPosition",
            };
            rels.push(PgRelationship { start: s.subject().to_string(), end: id.clone(), rel_type: link.into(), properties: member.clone() });
            match &p.input {
                ObjectInput::Resource(o) => {
                    rels.push(PgRelationship { start: id, end: o.to_string(), rel_type: "resourceURI".into(), properties: member })
                }
                ObjectInput::Literal(_) => {}
            }
        }
    }
    for v in store.versions.values() {
        let r = version_to_record(v);
        let id = v.upri.to_string();
        nodes.insert(id.clone(), PgNode { id, labels: vec![VERSION.into()], properties: properties(VERSION_FIELDS, &r, &[]) });
    }
    for res in store.resources.values() {
        let r = resource_to_record(res);
        let id = res.upri.to_string();
        nodes
            .entry(id.clone())
            .and_modify(|n| n.labels.push(RESOURCE.into()))
            .or_insert(PgNode { id, labels: vec![RESOURCE.into()], properties: properties(RESOURCE_FIELDS, &r, &[]) });
    }
    for r in &rels {
        for end in [&r.start, &r.end] {
            nodes.entry(end.clone()).or_insert_with(|| PgNode { id: end.clone(), labels: vec![REFERENCE.into()], properties: Map::new() });
        }
    }
    rels.sort_by(|a, b| (&a.start, &a.end, &a.rel_type).cmp(&(&b.start, &b.end, &b.rel_type)));
    PropertyGraphDoc { nodes: nodes.into_values().collect(), relationships: rels }
}

fn record_from(schema: &[FieldDef], node: &PgNode, skip: &[&str]) -> Result<Record, BackendError> {
    let mut r = Record::new();
    r.insert(KEY, FieldValue::Iri(Upri::new(node.id.as_str()).map_err(|e| BackendError::mismatch(&node.id, e.to_string()))?));
    for (k, v) in &node.properties {
        if skip.contains(&k.as_str()) {
            continue;
        }
        let def = field(schema, k).ok_or_else(|| BackendError::mismatch(&node.id, format!("unexpected property {k}")))?;
        r.insert(def.name, decode(def, &node.id, v)?);
    }
    Ok(r)
}

const MEMBERSHIP: [&str; 6] = ["statementUnitURI", "compoundUnitURI", "listUnitURI", "versionID", "datasetUnitID", "current_version"];

fn position_record(node: &PgNode, links: &BTreeMap<&str, &str>) -> Result<Record, BackendError> {
    let mut r = record_from(POSITION_FIELDS, node, &MEMBERSHIP)?;
    let prop = |k: &str| node.properties.get(k).ok_or_else(|| BackendError::mismatch(&node.id, format!("missing {k}")));
    let owners = prop("statementUnitURI")?.as_array().filter(|a| a.len() == 1).and_then(|a| a[0].as_str());
    let owner = owners.ok_or_else(|| BackendError::mismatch(&node.id, "statementUnitURI must hold exactly one unit"))?;
    r.insert(OWNER, decode(field(POSITION_FIELDS, OWNER).expect("owner field"), &node.id, &json!(owner))?);
    for (field_name, key) in [("current_version", "current_version"), ("version_ids", "versionID"), ("dataset_unit_ids", "datasetUnitID")] {
        let def = field(POSITION_FIELDS, field_name).expect("declared position field");
        let v = decode(def, &node.id, prop(key)?)?;
        if !matches!(&v, FieldValue::IriSet(s) if s.is_empty()) {
            r.insert(def.name, v);
        }
    }
    let link = match links.get(node.id.as_str()) {
        Some(&"requiredObjectPosition") => "required",
        Some(&"optionalObjectPosition") => "optional",
        _ => return Err(BackendError::mismatch(&node.id, "object position without a subject relationship")),
    };
    r.insert(LINK, FieldValue::Text(link.into()));
    Ok(r)
}

/// Rebuilds a store from a document written by [`export_pg`].
pub fn import_pg(doc: &PropertyGraphDoc) -> Result<Store, BackendError> {
    let links: BTreeMap<&str, &str> = doc
        .relationships
        .iter()
        .filter(|r| r.rel_type.ends_with("ObjectPosition"))
        .map(|r| (r.end.as_str(), r.rel_type.as_str()))
        .collect();
    let (mut units, mut positions, mut versions, mut resources) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for n in &doc.nodes {
        let has = |l: &str| n.labels.iter().any(|x| x == l);
        if has(SEMANTIC_UNIT) {
            units.push(record_from(UNIT_FIELDS, n, &[])?);
        } else if has(OBJECT_POSITION) {
            positions.push(position_record(n, &links)?);
        } else if has(VERSION) {
            versions.push(record_from(VERSION_FIELDS, n, &[])?);
        } else if has(RESOURCE) {
            resources.push(record_from(RESOURCE_FIELDS, n, &[])?);
        } else if !has(REFERENCE) && !has(LITERAL_NODE) {
            return Err(BackendError::mismatch(&n.id, format!("unknown node labels {:?}", n.labels)));
        }
    }
    Ok(store_from_records(units, positions, versions, resources)?)
}
