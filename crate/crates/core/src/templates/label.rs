use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use regex::Regex;

use super::TemplateError;
use crate::model::*;
use crate::spec::sentence::{is_connective, Segment, Sentence};
use crate::spec::{LabelVariant, Spec, StatementKgbbClass};

/// Human-readable form of a resource: its label, its class label, or its local name.
pub fn display_resource(store: &Store, spec: &Spec, upri: &Upri) -> String {
    if let Some(l) = store.resource(upri).and_then(|r| r.label.as_deref()) {
        return l.to_string();
    }
    if let Some(l) = spec.ontology.label(upri) {
        return l.to_string();
    }
    if let Some(u) = store.unit(upri) {
        return u.meta().label.clone();
    }
    upri.local_name().to_string()
}

pub fn display_input(store: &Store, spec: &Spec, input: &ObjectInput) -> String {
    match input {
        ObjectInput::Resource(r) => display_resource(store, spec, r),
        ObjectInput::Literal(l) => l.render(),
    }
}

/// Placeholder values of a statement keyed by thematic label, from current or versioned inputs.
pub fn statement_values(store: &Store, spec: &Spec, s: &StatementUnit, version: Option<&Upri>) -> BTreeMap<String, String> {
    let class = spec.statement_class(&s.meta.kgbb_uri);
    let mut out = BTreeMap::new();
    let subject_label = class.map(|c| c.subject.label.clone()).unwrap_or_else(|| "SUBJECT".into());
    out.insert(subject_label, display_resource(store, spec, s.subject()));
    let positions: Vec<&ObjectPositionInstance> = match version {
        Some(v) => s.positions_at(v).collect(),
        None => s.current_positions().collect(),
    };
    for p in positions {
        let label = class
            .and_then(|c| c.position(&p.position_class))
            .map(|c| c.label.clone())
            .unwrap_or_else(|| p.input_type_label.clone());
        out.insert(label, display_input(store, spec, &p.input));
    }
    out
}

fn required_labels(class: &StatementKgbbClass) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = class.positions.iter().filter(|p| p.required).map(|p| p.label.clone()).collect();
    out.insert(class.subject.label.clone());
    out
}

static EMPTY_BRACKETS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\(\s*[-–/,;:]?\s*\)|\[\s*[-–/,;:]?\s*\]").expect("static regex"));
static SPACES: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+").expect("static regex"));
static SPACE_BEFORE_PUNCT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+([,.;:?!)])").expect("static regex"));
static ARTICLE_A: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b([Aa]) ([aeiouAEIOU])").expect("static regex"));

/// Fills a label template, eliding unbound optional placeholders with their leading connectives.
pub fn fill(sentence: &Sentence, values: &BTreeMap<String, String>, required: &BTreeSet<String>) -> Result<String, TemplateError> {
    let mut out = String::new();
    let mut protected = 0;
    for seg in &sentence.segments {
        match seg {
            Segment::Text(t) => out.push_str(t),
            Segment::Placeholder(p) => match values.get(p) {
                Some(v) => {
                    out.push_str(v);
                    protected = out.len();
                }
                None if required.contains(p) => return Err(TemplateError::MissingRequiredBinding(p.clone())),
                None => loop {
                    let trimmed_len = out.trim_end().len().max(protected);
                    out.truncate(trimmed_len);
                    let tail = &out[protected..];
                    let start = tail.rfind(char::is_whitespace).map(|i| i + 1).unwrap_or(0);
                    let word = &tail[start..];
                    if word.is_empty() || !is_connective(word) {
                        out.push(' ');
                        break;
                    }
                    out.truncate(protected + start);
                },
            },
        }
    }
    Ok(tidy(&out))
}

fn tidy(text: &str) -> String {
    let t = EMPTY_BRACKETS.replace_all(text, " ");
    let t = SPACES.replace_all(&t, " ");
    let t = SPACE_BEFORE_PUNCT.replace_all(&t, "$1");
    let t = ARTICLE_A.replace_all(&t, "${1}n $2");
    t.trim().to_string()
}

/// Renders one of a class's label templates against a statement.
pub fn render_variant(store: &Store, spec: &Spec, s: &StatementUnit, variant: LabelVariant, version: Option<&Upri>) -> Result<String, TemplateError> {
    let class = spec.statement_class(&s.meta.kgbb_uri).ok_or_else(|| TemplateError::UnknownKgbb(s.meta.kgbb_uri.clone()))?;
    let template = class.label_template(variant).ok_or_else(|| TemplateError::NoLabelTemplate(class.id.clone()))?;
    let sentence = Sentence::parse(template)?;
    fill(&sentence, &statement_values(store, spec, s, version), &required_labels(class))
}

/// The default dynamic label of a statement unit.
pub fn render_dynamic_label(store: &Store, spec: &Spec, unit: &Upri) -> Result<String, TemplateError> {
    render_variant(store, spec, statement(store, unit)?, LabelVariant::Default, None)
}

/// The label for the statement's category, or the negation variant for negated statements.
pub fn render_category_label(store: &Store, spec: &Spec, unit: &Upri) -> Result<String, TemplateError> {
    let s = statement(store, unit)?;
    render_variant(store, spec, s, category_variant(s), None)
}

pub(crate) fn category_variant(s: &StatementUnit) -> LabelVariant {
    if s.negated {
        LabelVariant::Negated
    } else {
        LabelVariant::for_category(s.category)
    }
}

/// Label for any unit: category label for statements, class label and subject for compounds.
pub fn render_unit_label(store: &Store, spec: &Spec, unit: &Upri) -> Result<String, TemplateError> {
    let u = store.unit(unit).ok_or_else(|| TemplateError::UnknownUnit(unit.clone()))?;
    match u {
        SemanticUnit::Statement(s) => render_variant(store, spec, s, category_variant(s), None),
        SemanticUnit::Question(q) => crate::query::render_question_label(store, spec, q),
        other => {
            let m = other.meta();
            Ok(match &m.subject {
                Some(s) => format!("{}: {}", m.label, display_resource(store, spec, s)),
                None => m.label.clone(),
            })
        }
    }
}

/// Fills a class's default template from `value | value | ...` notation, subject first then positions in order.
pub fn render_pipe_notation(class: &StatementKgbbClass, values: &str) -> Result<String, TemplateError> {
    let template = class.label_template(LabelVariant::Default).ok_or_else(|| TemplateError::NoLabelTemplate(class.id.clone()))?;
    let labels = std::iter::once(&class.subject.label).chain(class.positions.iter().map(|p| &p.label));
    let map = labels
        .zip(values.split('|'))
        .filter(|(_, v)| !v.trim().is_empty())
        .map(|(l, v)| (l.clone(), v.trim().to_string()))
        .collect();
    fill(&Sentence::parse(template)?, &map, &required_labels(class))
}

pub(crate) fn statement<'s>(store: &'s Store, unit: &Upri) -> Result<&'s StatementUnit, TemplateError> {
    match store.unit(unit) {
        Some(SemanticUnit::Statement(s)) => Ok(s),
        Some(_) => Err(TemplateError::NotAStatement(unit.clone())),
        None => Err(TemplateError::UnknownUnit(unit.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fill_str(t: &str, pairs: &[(&str, &str)], required: &[&str]) -> String {
        let values = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let required = required.iter().map(|s| s.to_string()).collect();
        fill(&Sentence::parse(t).unwrap(), &values, &required).unwrap()
    }

    #[test]
    fn elides_unbound_optionals_with_connectives() {
        let t = "{PERSON} travels by {TRANSPORTATION} from {DEPARTURE_LOCATION} to {DESTINATION_LOCATION} on the {DATETIME}";
        assert_eq!(fill_str(t, &[("PERSON", "Anna"), ("DESTINATION_LOCATION", "Rome")], &[]), "Anna travels to Rome");
        assert_eq!(
            fill_str(t, &[("PERSON", "Anna"), ("DEPARTURE_LOCATION", "Berlin"), ("DESTINATION_LOCATION", "Rome")], &[]),
            "Anna travels from Berlin to Rome"
        );
    }

    #[test]
    fn drops_empty_brackets() {
        let t = "{QUALITY} (95% conf. interval): {VALUE} ({LOWER}-{UPPER}) {UNIT}";
        assert_eq!(fill_str(t, &[("QUALITY", "weight"), ("VALUE", "5"), ("UNIT", "kilogram")], &[]), "weight (95% conf. interval): 5 kilogram");
    }

    #[test]
    fn fixes_indefinite_article() {
        assert_eq!(fill_str("A {S} is here", &[("S", "apple")], &[]), "An apple is here");
    }

    #[test]
    fn required_must_be_bound() {
        let s = Sentence::parse("{S} has {P}").unwrap();
        let err = fill(&s, &BTreeMap::new(), &BTreeSet::from(["P".to_string()])).unwrap_err();
        assert_eq!(err, TemplateError::MissingRequiredBinding("P".into()));
    }
}
