use std::collections::BTreeMap;

use serde::Serialize;

use super::TemplateError;
use crate::engine::{CreateRequest, Ids, InputValue, Provenance, ResourceRef};
use crate::model::*;
use crate::spec::{ImportTemplate, ObjectType, Slot, Spec, StatementKgbbClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowDiagnostic {
    /// One-based data row, not counting the header.
    pub row: usize,
    pub column: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportBatch {
    pub provenance: Provenance,
    pub requests: Vec<(usize, CreateRequest)>,
    pub rejected: Vec<RowDiagnostic>,
}

struct Resolver<'a> {
    store: &'a Store,
    spec: &'a Spec,
    ids: &'a mut Ids,
    minted: BTreeMap<(ResourceKind, Option<Upri>, String), Upri>,
}

impl Resolver<'_> {
    /// An existing identifier, a stored resource with the same label and a fitting class, or a new resource.
    fn resolve(&mut self, value: &str, kind: ResourceKind, class: Option<&Upri>) -> ResourceRef {
        if let Ok(u) = Upri::new(value) {
            if self.store.resource(&u).is_some() || self.spec.ontology.contains(&u) || self.store.unit(&u).is_some() {
                return ResourceRef::Existing(u);
            }
        }
        let fits = |r: &Resource| match (class, &r.class_affiliation) {
            (Some(c), Some(a)) => self.spec.ontology.is_subclass_of(a, c),
            (None, _) => true,
            (Some(_), None) => false,
        };
        if let Some(r) = self.store.resources.values().find(|r| r.kind == kind && r.label.as_deref() == Some(value) && fits(r)) {
            return ResourceRef::Existing(r.upri.clone());
        }
        let key = (kind, class.cloned(), value.to_string());
        let upri = match self.minted.get(&key) {
            Some(u) => u.clone(),
            None => {
                let u = self.ids.mint();
                self.minted.insert(key, u.clone());
                u
            }
        };
        ResourceRef::New(crate::engine::NewResource { upri: Some(upri), kind, class: class.cloned(), label: Some(value.to_string()) })
    }
}

fn row_request(
    class: &StatementKgbbClass,
    kgbb: &Upri,
    template: &ImportTemplate,
    values: &[(Slot, String, String)],
    r: &mut Resolver<'_>,
) -> Result<CreateRequest, (String, String)> {
    let mut req = CreateRequest::new(kgbb.clone());
    req.category_choice = template.category_choice;
    for (slot, column, value) in values {
        if value.trim().is_empty() {
            continue;
        }
        let value = value.trim();
        match slot {
            Slot::Subject => {
                req.subject = Some(r.resolve(value, template.subject_kind, class.subject.class.as_ref()));
            }
            Slot::Position(p) => {
                let pos = class.position(p).ok_or_else(|| (column.clone(), format!("unknown position {p}")))?;
                let input = match pos.object_type {
                    ObjectType::Resource => InputValue::Resource(r.resolve(value, template.object_kind, pos.constraint.class.as_ref())),
                    ObjectType::Literal => {
                        let dt = pos.constraint.datatype.unwrap_or(Datatype::String);
                        InputValue::Literal(Literal::new(value, dt).map_err(|e| (column.clone(), e.to_string()))?)
                    }
                };
                req.inputs.insert(p.clone(), input);
            }
        }
    }
    if req.subject.is_none() {
        let column = values.iter().find(|(s, ..)| s == &Slot::Subject).map(|(_, c, _)| c.clone()).unwrap_or_default();
        return Err((column, "subject is empty".into()));
    }
    for p in class.positions.iter().filter(|p| p.required) {
        if !req.inputs.contains_key(&p.id) {
            let column = values.iter().find(|(s, ..)| s == &Slot::Position(p.id.clone())).map(|(_, c, _)| c.clone()).unwrap_or_default();
            return Err((column, format!("required position {} is empty", p.label)));
        }
    }
    Ok(req)
}

/// Turns CSV rows into create requests; bad rows are reported and skipped.
pub fn apply_import_template(
    store: &Store,
    spec: &Spec,
    kgbb: &Upri,
    template: &Upri,
    csv_text: &str,
    provenance: Provenance,
    source: Upri,
    ids: &mut Ids,
) -> Result<ImportBatch, TemplateError> {
    let class = spec.statement_class(kgbb).ok_or_else(|| TemplateError::UnknownKgbb(kgbb.clone()))?;
    let t = class.import_template(template).ok_or_else(|| TemplateError::UnknownTemplate(template.clone()))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(csv_text.as_bytes());
    let headers = reader.headers().map_err(|e| TemplateError::Csv(e.to_string()))?.clone();
    let mut columns = Vec::new();
    for (name, slot) in &t.columns {
        let idx = headers.iter().position(|h| h == name).ok_or_else(|| TemplateError::MissingColumn(name.clone()))?;
        columns.push((idx, name.clone(), slot.clone()));
    }
    let mut resolver = Resolver { store, spec, ids, minted: BTreeMap::new() };
    let mut batch = ImportBatch {
        provenance: Provenance { imported_from: Some(source), ..provenance },
        requests: Vec::new(),
        rejected: Vec::new(),
    };
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                batch.rejected.push(RowDiagnostic { row, column: String::new(), message: e.to_string() });
                continue;
            }
        };
        let mut values: Vec<(Slot, String, String)> =
            columns.iter().map(|(idx, name, slot)| (slot.clone(), name.clone(), record.get(*idx).unwrap_or("").to_string())).collect();
        values.extend(t.constants.iter().map(|(slot, v)| (slot.clone(), String::new(), v.clone())));
        match row_request(class, kgbb, t, &values, &mut resolver) {
            Ok(req) => batch.requests.push((row, req)),
            Err((column, message)) => batch.rejected.push(RowDiagnostic { row, column, message }),
        }
    }
    Ok(batch)
}
