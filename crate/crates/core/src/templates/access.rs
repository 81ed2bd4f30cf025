use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::TemplateError;
use crate::engine::Ids;
use crate::model::*;
use crate::spec::{AccessFormat, AccessTemplate, Slot, Spec, StatementKgbbClass};

/// Output of an access template in the template's declared format.
#[derive(Debug, Clone, PartialEq)]
pub enum AccessOutput {
    Triples(Vec<Triple>),
    Csv(String),
    Json(Value),
}

/// Finds a template of the class by identifier, falling back to the first one with a matching family tag.
pub fn find_access_template<'c>(class: &'c StatementKgbbClass, id_or_family: &str) -> Option<&'c AccessTemplate> {
    class
        .access_templates
        .iter()
        .find(|t| t.id.as_str() == id_or_family)
        .or_else(|| class.access_templates.iter().find(|t| t.family == id_or_family))
}

fn check_coverage(class: &StatementKgbbClass, template: &AccessTemplate) -> Result<(), TemplateError> {
    for p in class.positions.iter().filter(|p| p.required) {
        if !template.mapping.iter().any(|(_, s)| s == &Slot::Position(p.id.clone())) {
            return Err(TemplateError::UnmappedRequiredPosition { template: template.id.clone(), position: p.id.clone() });
        }
    }
    Ok(())
}

fn slot_value(s: &StatementUnit, slot: &Slot) -> Option<Term> {
    match slot {
        Slot::Subject => Some(Term::Iri(s.subject().clone())),
        Slot::Position(p) => s.current(p).map(|i| match &i.input {
            ObjectInput::Resource(r) => Term::Iri(r.clone()),
            ObjectInput::Literal(l) => Term::Literal(l.clone()),
        }),
    }
}

fn parse_term(t: &str) -> Result<Term, TemplateError> {
    if let Some(text) = t.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
        return Ok(Term::Literal(Literal::string(text)));
    }
    if t == "a" {
        return Ok(Term::iri(vocab::RDF_TYPE));
    }
    Upri::new(t).map(Term::Iri).map_err(|_| TemplateError::BadPatternTerm(t.to_string()))
}

fn graph(s: &StatementUnit, template: &AccessTemplate, ids: &mut Ids) -> Result<Vec<Triple>, TemplateError> {
    let mut bound: BTreeMap<&str, Term> = BTreeMap::new();
    for (var, slot) in &template.mapping {
        if let Some(v) = slot_value(s, slot) {
            bound.insert(var.as_str(), v);
        }
    }
    let mut out = Vec::new();
    for rule in &template.fresh_nodes {
        let node = ids.mint();
        out.push(Triple { subject: node.clone(), predicate: Upri::from_static(vocab::RDF_TYPE), object: Term::Iri(rule.class.clone()) });
        bound.insert(rule.var.as_str(), Term::Iri(node));
    }
    'pattern: for [s_t, p_t, o_t] in &template.pattern {
        let mut terms = Vec::with_capacity(3);
        for t in [s_t, p_t, o_t] {
            if t.starts_with('?') {
                match bound.get(t.as_str()) {
                    Some(v) => terms.push(v.clone()),
                    None => continue 'pattern,
                }
            } else {
                terms.push(parse_term(t)?);
            }
        }
        let (Term::Iri(subject), Term::Iri(predicate)) = (terms[0].clone(), terms[1].clone()) else {
            return Err(TemplateError::BadPatternTerm(format!("{s_t} {p_t}")));
        };
        out.push(Triple { subject, predicate, object: terms[2].clone() });
    }
    Ok(out)
}

fn cell(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.to_string(),
        Term::Literal(l) => l.value().to_string(),
    }
}

/// Applies an access template to statement units of the template's class.
///
/// Graph formats yield triples; fresh nodes get new identifiers on every call.
pub fn apply_access_template(
    store: &Store,
    spec: &Spec,
    units: &[Upri],
    template: &AccessTemplate,
    ids: &mut Ids,
) -> Result<AccessOutput, TemplateError> {
    let mut statements = Vec::new();
    for u in units {
        let s = super::label::statement(store, u)?;
        let class = spec.statement_class(&s.meta.kgbb_uri).ok_or_else(|| TemplateError::UnknownKgbb(s.meta.kgbb_uri.clone()))?;
        if !class.access_templates.iter().any(|t| t.id == template.id) && template.family != "owl" {
            return Err(TemplateError::TemplateNotForClass { template: template.id.clone(), kgbb: s.meta.kgbb_uri.clone() });
        }
        check_coverage(class, template)?;
        statements.push(s);
    }
    match template.format {
        AccessFormat::GraphPattern | AccessFormat::Owl | AccessFormat::RdfOwl => {
            let mut out = Vec::new();
            for s in statements {
                out.extend(graph(s, template, ids)?);
            }
            Ok(AccessOutput::Triples(out))
        }
        AccessFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let header: Vec<&str> = template.mapping.iter().map(|(c, _)| c.as_str()).collect();
            w.write_record(&header).map_err(|e| TemplateError::Csv(e.to_string()))?;
            for s in statements {
                let row: Vec<String> = template.mapping.iter().map(|(_, slot)| slot_value(s, slot).map(|t| cell(&t)).unwrap_or_default()).collect();
                w.write_record(&row).map_err(|e| TemplateError::Csv(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| TemplateError::Csv(e.to_string()))?;
            Ok(AccessOutput::Csv(String::from_utf8(bytes).expect("csv writer emits utf-8")))
        }
        AccessFormat::Json => {
            let rows: Vec<Value> = statements
                .into_iter()
                .map(|s| {
                    let mut obj = Map::new();
                    obj.insert("@id".into(), json!(s.meta.upri));
                    for (key, slot) in &template.mapping {
                        let v = match slot_value(s, slot) {
                            Some(Term::Iri(i)) => json!(i),
                            Some(Term::Literal(l)) => json!({"value": l.value(), "datatype": l.datatype()}),
                            None => continue,
                        };
                        obj.insert(key.clone(), v);
                    }
                    Value::Object(obj)
                })
                .collect();
            Ok(AccessOutput::Json(Value::Array(rows)))
        }
    }
}
