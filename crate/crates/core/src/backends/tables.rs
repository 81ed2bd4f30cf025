//! Relational form: a semantic header table, one subject table per statement KGBB and one
//! object table per object-position class, plus version and resource tables.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BackendError;
use crate::model::record::*;
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableRole {
    Header,
    Subject,
    Object,
    Versions,
    Resources,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub table: String,
    pub file: String,
    pub role: TableRole,
    /// KGBB for subject tables, position class for object tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Upri>,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub tables: Vec<ManifestEntry>,
}

/// CSV bundle: manifest plus file name to RFC 4180 text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticTables {
    pub manifest: Manifest,
    pub files: BTreeMap<String, String>,
}

pub const FORMAT: &str = "kgbb-semantic-tables/1";
const SUBJECT_COLUMNS: [&str; 4] = ["statement_unit", "subject", "requiredObjectPosition", "optionalObjectPosition"];
const MANIFEST_FILE: &str = "manifest.json";

// Absent values are empty cells; text that is empty or starts with a backslash gets one
// leading backslash so both survive.
fn cell(v: &FieldValue) -> String {
    match v {
        FieldValue::Iri(u) => u.to_string(),
        FieldValue::IriSet(s) => s.iter().map(Upri::as_str).collect::<Vec<_>>().join(" "),
        FieldValue::IriList(l) => l.iter().map(Upri::as_str).collect::<Vec<_>>().join(" "),
        FieldValue::Text(t) if t.is_empty() || t.starts_with('\\') => format!("\\{t}"),
        FieldValue::Text(t) => t.clone(),
        FieldValue::Bool(b) => b.to_string(),
        FieldValue::Time(t) => t.to_string(),
        FieldValue::Json(j) => j.to_string(),
        FieldValue::Literal(l) => serde_json::to_string(l).expect("literals serialize"),
    }
}

fn parse_cell(def: &FieldDef, record: &str, s: &str) -> Result<Option<FieldValue>, BackendError> {
    if s.is_empty() {
        return Ok(None);
    }
    let bad = |d: String| BackendError::mismatch(record, format!("{}: {d}", def.name));
    let iri = |x: &str| Upri::new(x).map_err(|e| bad(e.to_string()));
    Ok(Some(match def.ty {
        FieldType::Iri => FieldValue::Iri(iri(s)?),
        FieldType::IriSet => FieldValue::IriSet(s.split(' ').map(iri).collect::<Result<_, _>>()?),
        FieldType::IriList => FieldValue::IriList(s.split(' ').map(iri).collect::<Result<_, _>>()?),
        FieldType::Text => FieldValue::Text(s.strip_prefix('\\').unwrap_or(s).to_string()),
        FieldType::Bool => match s {
            "true" => FieldValue::Bool(true),
            "false" => FieldValue::Bool(false),
            _ => return Err(bad(s.to_string())),
        },
        FieldType::Time => FieldValue::Time(Timestamp::parse(s).map_err(|e| bad(e.to_string()))?),
        FieldType::Json => FieldValue::Json(serde_json::from_str(s).map_err(|e| bad(e.to_string()))?),
        FieldType::Literal => FieldValue::Literal(serde_json::from_str(s).map_err(|e| bad(e.to_string()))?),
    }))
}

fn columns(schema: &[FieldDef], skip: &[&str]) -> Vec<String> {
    schema.iter().filter(|d| !skip.contains(&d.name)).map(|d| d.name.to_string()).collect()
}

fn write_csv(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv is utf-8")
}

fn record_row(record: &Record, cols: &[String]) -> Vec<String> {
    cols.iter().map(|c| record.get(c.as_str()).map(cell).unwrap_or_default()).collect()
}

fn slug(u: &Upri, taken: &mut BTreeSet<String>) -> String {
    let base: String = u.as_str().chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    let mut name = base.clone();
    let mut n = 2;
    while !taken.insert(name.clone()) {
        name = format!("{base}_{n}");
        n += 1;
    }
    name
}

/// Exports the store as a CSV bundle; rows are sorted by key for byte-stable output.
pub fn export_tables(store: &Store) -> SemanticTables {
    let [units, positions, versions, resources] = store_to_records(store);
    let mut out = SemanticTables { manifest: Manifest { format: FORMAT.into(), tables: Vec::new() }, files: BTreeMap::new() };
    let add = |out: &mut SemanticTables, table: String, role, class: Option<Upri>, cols: Vec<String>, rows: Vec<Vec<String>>| {
        let file = format!("{table}.csv");
        out.files.insert(file.clone(), write_csv(&cols, rows));
        out.manifest.tables.push(ManifestEntry { table, file, role, class, columns: cols });
    };
    let cols = columns(UNIT_FIELDS, &[]);
    let rows = units.iter().map(|r| record_row(r, &cols)).collect();
    add(&mut out, "header".into(), TableRole::Header, None, cols, rows);

    let mut subject_rows: BTreeMap<Upri, Vec<Vec<String>>> = BTreeMap::new();
    for s in store.statements() {
        for p in s.positions.values() {
            let (req, opt) = match p.link {
                PositionLink::Required => (p.upri.to_string(), String::new()),
                PositionLink::Optional => (String::new(), p.upri.to_string()),
            };
            subject_rows.entry(s.meta.kgbb_uri.clone()).or_default().push(vec![
                s.meta.upri.to_string(),
                s.subject().to_string(),
                req,
                opt,
            ]);
        }
    }
    let mut taken = BTreeSet::new();
    for (kgbb, rows) in subject_rows {
        let name = format!("subject_{}", slug(&kgbb, &mut taken));
        add(&mut out, name, TableRole::Subject, Some(kgbb), SUBJECT_COLUMNS.map(String::from).to_vec(), rows);
    }

    let cols = columns(POSITION_FIELDS, &[OWNER, LINK]);
    let mut object_rows: BTreeMap<Upri, Vec<Vec<String>>> = BTreeMap::new();
    for r in &positions {
        let Some(FieldValue::Iri(class)) = r.get("position_class") else { unreachable!("positions have a class") };
        object_rows.entry(class.clone()).or_default().push(record_row(r, &cols));
    }
    let mut taken = BTreeSet::new();
    for (class, rows) in object_rows {
        let name = format!("object_{}", slug(&class, &mut taken));
        add(&mut out, name, TableRole::Object, Some(class), cols.clone(), rows);
    }

    let cols = columns(VERSION_FIELDS, &[]);
    let rows = versions.iter().map(|r| record_row(r, &cols)).collect();
    add(&mut out, "versions".into(), TableRole::Versions, None, cols, rows);
    let cols = columns(RESOURCE_FIELDS, &[]);
    let rows = resources.iter().map(|r| record_row(r, &cols)).collect();
    add(&mut out, "resources".into(), TableRole::Resources, None, cols, rows);
    out
}

fn read_rows(bundle: &SemanticTables, entry: &ManifestEntry) -> Result<Vec<Vec<String>>, BackendError> {
    let text = bundle.files.get(&entry.file).ok_or_else(|| BackendError::mismatch(&entry.table, format!("missing file {}", entry.file)))?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(|e| BackendError::mismatch(&entry.table, e.to_string()))?.iter().map(String::from).collect();
    if header != entry.columns {
        return Err(BackendError::mismatch(&entry.table, format!("columns {header:?} differ from the manifest")));
    }
    r.records()
        .map(|row| row.map(|row| row.iter().map(String::from).collect()).map_err(|e| BackendError::mismatch(&entry.table, e.to_string())))
        .collect()
}

fn schema_for(role: TableRole) -> (&'static [FieldDef], &'static [&'static str]) {
    match role {
        TableRole::Header => (UNIT_FIELDS, &[]),
        TableRole::Object => (POSITION_FIELDS, &[OWNER, LINK]),
        TableRole::Versions => (VERSION_FIELDS, &[]),
        TableRole::Resources => (RESOURCE_FIELDS, &[]),
        TableRole::Subject => (&[], &[]),
    }
}

fn to_record(entry: &ManifestEntry, row: &[String]) -> Result<Record, BackendError> {
    let (schema, _) = schema_for(entry.role);
    let id = row.first().cloned().unwrap_or_default();
    let mut rec = Record::new();
    for (col, value) in entry.columns.iter().zip(row) {
        let def = field(schema, col).ok_or_else(|| BackendError::mismatch(&entry.table, format!("unknown column {col}")))?;
        if let Some(v) = parse_cell(def, &format!("{}:{id}", entry.table), value)? {
            rec.insert(def.name, v);
        }
    }
    Ok(rec)
}

/// Rebuilds a store from a bundle written by [`export_tables`].
pub fn import_tables(bundle: &SemanticTables) -> Result<Store, BackendError> {
    if bundle.manifest.format != FORMAT {
        return Err(BackendError::mismatch(MANIFEST_FILE, format!("unsupported format {}", bundle.manifest.format)));
    }
    for role in [TableRole::Header, TableRole::Versions, TableRole::Resources] {
        if !bundle.manifest.tables.iter().any(|t| t.role == role) {
            return Err(BackendError::mismatch(MANIFEST_FILE, format!("no {role:?} table")));
        }
    }
    let (mut units, mut versions, mut resources) = (Vec::new(), Vec::new(), Vec::new());
    let mut objects: BTreeMap<Upri, (String, Record)> = BTreeMap::new();
    let mut owners: BTreeMap<Upri, (String, Upri, &'static str)> = BTreeMap::new();
    for entry in &bundle.manifest.tables {
        let (schema, skip) = schema_for(entry.role);
        if entry.role == TableRole::Subject {
            if entry.columns != SUBJECT_COLUMNS {
                return Err(BackendError::mismatch(&entry.table, "unexpected subject table columns"));
            }
        } else if entry.columns != columns(schema, skip) {
            return Err(BackendError::mismatch(&entry.table, "columns do not match the record schema"));
        }
        for row in read_rows(bundle, entry)? {
            match entry.role {
                TableRole::Header => units.push(to_record(entry, &row)?),
                TableRole::Versions => versions.push(to_record(entry, &row)?),
                TableRole::Resources => resources.push(to_record(entry, &row)?),
                TableRole::Object => {
                    let rec = to_record(entry, &row)?;
                    let Some(FieldValue::Iri(id)) = rec.get(KEY).cloned() else {
                        return Err(BackendError::mismatch(&entry.table, "row without key"));
                    };
                    if entry.class.as_ref().is_some_and(|c| rec.get("position_class") != Some(&FieldValue::Iri(c.clone()))) {
                        return Err(BackendError::mismatch(format!("{}:{id}", entry.table), "position class differs from the table class"));
                    }
                    objects.insert(id, (entry.table.clone(), rec));
                }
                TableRole::Subject => {
                    let ctx = format!("{}:{}", entry.table, row[0]);
                    let iri = |s: &str| Upri::new(s).map_err(|e| BackendError::mismatch(&ctx, e.to_string()));
                    let (p, link) = match (row[2].is_empty(), row[3].is_empty()) {
                        (false, true) => (iri(&row[2])?, "required"),
                        (true, false) => (iri(&row[3])?, "optional"),
                        _ => return Err(BackendError::mismatch(&ctx, "exactly one position column must be filled")),
                    };
                    owners.insert(p, (entry.table.clone(), iri(&row[0])?, link));
                }
            }
        }
    }
    let mut positions = Vec::new();
    for (p, (table, owner, link)) in owners {
        let (_, mut rec) = objects
            .remove(&p)
            .ok_or_else(|| BackendError::mismatch(format!("{table}:{owner}"), format!("object position {p} is in no object table")))?;
        rec.insert(OWNER, FieldValue::Iri(owner));
        rec.insert(LINK, FieldValue::Text(link.into()));
        positions.push(rec);
    }
    if let Some((p, (table, _))) = objects.into_iter().next() {
        return Err(BackendError::mismatch(format!("{table}:{p}"), "object position is in no subject table"));
    }
    Ok(store_from_records(units, positions, versions, resources)?)
}

impl SemanticTables {
    /// Writes `manifest.json` and every CSV file into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<(), BackendError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&self.manifest)?)?;
        for (name, text) in &self.files {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }

    /// Reads a bundle directory; files named in the manifest but absent are left out so that
    /// [`import_tables`] reports them.
    pub fn read_dir(dir: &Path) -> Result<Self, BackendError> {
        let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(dir.join(MANIFEST_FILE))?)?;
        let mut files = BTreeMap::new();
        for t in &manifest.tables {
            match std::fs::read_to_string(dir.join(&t.file)) {
                Ok(text) => {
                    files.insert(t.file.clone(), text);
                }
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Self { manifest, files })
    }
}
