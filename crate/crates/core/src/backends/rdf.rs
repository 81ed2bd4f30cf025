//! TriG codec: one data graph per statement unit named by its UPRI, one metadata graph
//! per unit, and dedicated graphs for version nodes and resources.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use oxttl::TriGParser;

use super::BackendError;
use crate::model::record::*;
use crate::model::*;

/// Appended to a unit's UPRI to name the graph holding its semantic-units-layer triples.
pub const META_GRAPH_SUFFIX: &str = "/meta";

const PREFIXES: [(&str, &str); 4] =
    [("kgbb", vocab::KGBB_NS), ("rdf", vocab::RDF_NS), ("rdfs", vocab::RDFS_NS), ("xsd", vocab::XSD_NS)];

pub(crate) fn escape_iri(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}

fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn iri(s: &str) -> String {
    if s == vocab::RDF_TYPE {
        return "a".into();
    }
    for (p, ns) in PREFIXES {
        if let Some(local) = s.strip_prefix(ns) {
            let mut chars = local.chars();
            if chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return format!("{p}:{local}");
            }
        }
    }
    format!("<{}>", escape_iri(s))
}

fn term(t: &Term) -> String {
    match t {
        Term::Iri(u) => iri(u.as_str()),
        Term::Literal(l) if l.datatype() == Datatype::String => format!("\"{}\"", escape_string(l.value())),
        Term::Literal(l) => format!("\"{}\"^^{}", escape_string(l.value()), iri(l.datatype().xsd_iri())),
    }
}

fn line(s: &Upri, p: &str, o: &Term) -> String {
    format!("{} {} {} .", iri(s.as_str()), iri(p), term(o))
}

fn field_terms(value: &FieldValue) -> Vec<Term> {
    match value {
        FieldValue::Iri(u) => vec![Term::Iri(u.clone())],
        FieldValue::IriSet(s) => s.iter().cloned().map(Term::Iri).collect(),
        FieldValue::IriList(l) => vec![Term::Literal(Literal::string(serde_json::to_string(l).expect("strings serialize")))],
        FieldValue::Text(t) => vec![Term::Literal(Literal::string(t))],
        FieldValue::Bool(b) => vec![Term::boolean(*b)],
        FieldValue::Time(t) => vec![Term::time(*t)],
        FieldValue::Json(j) => vec![Term::Literal(Literal::string(j.to_string()))],
        FieldValue::Literal(l) => vec![Term::Literal(l.clone())],
    }
}

fn record_lines(schema: &[FieldDef], record: &Record, out: &mut BTreeSet<String>) {
    let FieldValue::Iri(subject) = &record[KEY] else { unreachable!("records are keyed by an IRI") };
    for (name, value) in record {
        let Some(def) = field(schema, name) else { continue };
        if def.predicate.is_empty() {
            continue;
        }
        for t in field_terms(value) {
            out.insert(line(subject, def.predicate, &t));
        }
    }
}

/// Serializes the store as TriG with graphs and triples sorted for byte-stable output.
pub fn export_rdf(store: &Store) -> String {
    let mut graphs: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let [units, _, versions, resources] = store_to_records(store);
    for r in &units {
        let FieldValue::Iri(u) = &r[KEY] else { unreachable!() };
        record_lines(UNIT_FIELDS, r, graphs.entry(format!("{u}{META_GRAPH_SUFFIX}")).or_default());
    }
    for s in store.statements() {
        let lines = graphs.entry(s.meta.upri.to_string()).or_default();
        for t in s.data_graph() {
            lines.insert(line(&t.subject, t.predicate.as_str(), &t.object));
        }
    }
    for r in &versions {
        record_lines(VERSION_FIELDS, r, graphs.entry(vocab::VERSIONS_GRAPH.to_string()).or_default());
    }
    for r in &resources {
        record_lines(RESOURCE_FIELDS, r, graphs.entry(vocab::RESOURCES_GRAPH.to_string()).or_default());
    }
    let mut out = String::new();
    for (p, ns) in PREFIXES {
        let _ = writeln!(out, "@prefix {p}: <{ns}> .");
    }
    for (g, lines) in graphs.into_iter().filter(|(_, l)| !l.is_empty()) {
        let _ = writeln!(out, "\n<{}> {{", escape_iri(&g));
        for l in lines {
            let _ = writeln!(out, "  {l}");
        }
        out.push_str("}\n");
    }
    out
}

#[derive(Debug, Clone)]
enum Obj {
    Iri(String),
    Lit { value: String, datatype: String },
}

struct Quad {
    subject: String,
    predicate: String,
    object: Obj,
}

fn upri(s: &str, context: &str) -> Result<Upri, BackendError> {
    Upri::new(s).map_err(|e| BackendError::mismatch(context, e.to_string()))
}

fn decode(def: &FieldDef, subject: &str, object: &Obj, record: &mut Record) -> Result<(), BackendError> {
    let bad = |detail: &str| BackendError::mismatch(subject, format!("{}: {detail}", def.name));
    let lit = || match object {
        Obj::Lit { value, datatype } => Ok((value.as_str(), datatype.as_str())),
        Obj::Iri(_) => Err(bad("expected a literal")),
    };
    let value = match (def.ty, object) {
        (FieldType::Iri, Obj::Iri(i)) => FieldValue::Iri(upri(i, subject)?),
        (FieldType::IriSet, Obj::Iri(i)) => {
            let u = upri(i, subject)?;
            match record.entry(def.name).or_insert_with(|| FieldValue::IriSet(BTreeSet::new())) {
                FieldValue::IriSet(s) => {
                    s.insert(u);
                }
                _ => return Err(bad("mixed values")),
            }
            return Ok(());
        }
        (FieldType::Iri | FieldType::IriSet, Obj::Lit { .. }) => return Err(bad("expected an IRI")),
        (FieldType::IriList, _) => FieldValue::IriList(serde_json::from_str(lit()?.0).map_err(|e| bad(&e.to_string()))?),
        (FieldType::Text, _) => FieldValue::Text(lit()?.0.to_string()),
        (FieldType::Bool, _) => match lit()?.0 {
            "true" => FieldValue::Bool(true),
            "false" => FieldValue::Bool(false),
            other => return Err(bad(other)),
        },
        (FieldType::Time, _) => FieldValue::Time(Timestamp::parse(lit()?.0).map_err(|e| bad(&e.to_string()))?),
        (FieldType::Json, _) => FieldValue::Json(serde_json::from_str(lit()?.0).map_err(|e| bad(&e.to_string()))?),
        (FieldType::Literal, _) => {
            let (value, dt) = lit()?;
            let dt = Datatype::from_xsd_iri(dt).ok_or_else(|| bad(dt))?;
            FieldValue::Literal(Literal::new(value, dt).map_err(|e| bad(&e.to_string()))?)
        }
    };
    if record.insert(def.name, value).is_some() {
        return Err(bad("more than one value"));
    }
    Ok(())
}

fn records(schema: &[FieldDef], quads: &[Quad]) -> Result<Vec<Record>, BackendError> {
    let mut by_subject: BTreeMap<&str, Record> = BTreeMap::new();
    for q in quads {
        let def = field_by_predicate(schema, &q.predicate)
            .ok_or_else(|| BackendError::mismatch(&q.subject, format!("unexpected predicate {}", q.predicate)))?;
        let rec = match by_subject.get_mut(q.subject.as_str()) {
            Some(r) => r,
            None => {
                let mut r = Record::new();
                r.insert(KEY, FieldValue::Iri(upri(&q.subject, &q.subject)?));
                by_subject.entry(&q.subject).or_insert(r)
            }
        };
        decode(def, &q.subject, &q.object, rec)?;
    }
    Ok(by_subject.into_values().collect())
}

fn positions(owner: &str, quads: &[Quad]) -> Result<Vec<Record>, BackendError> {
    let mut links: BTreeMap<&str, &'static str> = BTreeMap::new();
    for q in quads {
        let link = match q.predicate.as_str() {
            vocab::REQUIRED_OBJECT_POSITION => "required",
            vocab::OPTIONAL_OBJECT_POSITION => "optional",
            _ => continue,
        };
        let Obj::Iri(p) = &q.object else { return Err(BackendError::mismatch(owner, "position link to a literal")) };
        links.insert(p, link);
    }
    let owner_upri = upri(owner, owner)?;
    let mut recs: BTreeMap<&str, Record> = links
        .iter()
        .map(|(p, link)| {
            let mut r = Record::new();
            r.insert(KEY, FieldValue::Iri(upri(p, owner)?));
            r.insert(OWNER, FieldValue::Iri(owner_upri.clone()));
            r.insert(LINK, FieldValue::Text(link.to_string()));
            Ok((*p, r))
        })
        .collect::<Result<_, BackendError>>()?;
    for q in quads {
        if q.predicate == vocab::REQUIRED_OBJECT_POSITION || q.predicate == vocab::OPTIONAL_OBJECT_POSITION {
            continue;
        }
        let rec = recs
            .get_mut(q.subject.as_str())
            .ok_or_else(|| BackendError::mismatch(owner, format!("triple about {} outside any object position", q.subject)))?;
        let def = field_by_predicate(POSITION_FIELDS, &q.predicate)
            .ok_or_else(|| BackendError::mismatch(&q.subject, format!("unexpected predicate {}", q.predicate)))?;
        decode(def, &q.subject, &q.object, rec)?;
    }
    Ok(recs.into_values().collect())
}

/// Parses TriG written by [`export_rdf`] back into a store.
pub fn import_rdf(text: &str) -> Result<Store, BackendError> {
    let mut graphs: BTreeMap<String, Vec<Quad>> = BTreeMap::new();
    for q in TriGParser::new().lenient().for_slice(text) {
        let q = q.map_err(|e| BackendError::Syntax(e.to_string()))?;
        let oxrdf::GraphName::NamedNode(g) = q.graph_name else {
            return Err(BackendError::mismatch(q.subject, "triple outside a named graph"));
        };
        let oxrdf::NamedOrBlankNode::NamedNode(s) = q.subject else {
            return Err(BackendError::mismatch(g.as_str(), "blank node subject"));
        };
        let object = match q.object {
            oxrdf::Term::NamedNode(n) => Obj::Iri(n.into_string()),
            oxrdf::Term::Literal(l) => {
                let (value, datatype, _) = l.destruct();
                Obj::Lit { value, datatype: datatype.map(|d| d.into_string()).unwrap_or_else(|| Datatype::String.xsd_iri().into()) }
            }
            other => return Err(BackendError::mismatch(s.as_str(), format!("unsupported term {other}"))),
        };
        graphs.entry(g.into_string()).or_default().push(Quad { subject: s.into_string(), predicate: q.predicate.into_string(), object });
    }
    let (mut units, mut pos, mut versions, mut resources) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (g, quads) in &graphs {
        if g == vocab::VERSIONS_GRAPH {
            versions.extend(records(VERSION_FIELDS, quads)?);
        } else if g == vocab::RESOURCES_GRAPH {
            resources.extend(records(RESOURCE_FIELDS, quads)?);
        } else if quads.iter().any(|q| q.predicate == vocab::UNIT_KIND) {
            units.extend(records(UNIT_FIELDS, quads)?);
        } else {
            pos.extend(positions(g, quads)?);
        }
    }
    Ok(store_from_records(units, pos, versions, resources)?)
}
