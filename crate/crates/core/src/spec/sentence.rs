//! Label templates: text with `{PLACEHOLDER}` slots named by thematic labels.

use std::collections::BTreeSet;
use std::fmt;

use super::LabelVariant;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Text(String),
    Placeholder(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SentenceError {
    #[error("unbalanced brace in template {0:?}")]
    Unbalanced(String),
    #[error("empty placeholder in template {0:?}")]
    EmptyPlaceholder(String),
    #[error("template {0:?} must start with the subject placeholder")]
    SubjectNotFirst(String),
    #[error("template {0:?} has no verb after the subject")]
    NoVerb(String),
}

/// Words that attach an object to the verb and are dropped with an unbound optional position.
pub const CONNECTIVES: &[&str] = &[
    "by", "from", "to", "on", "the", "at", "in", "with", "of", "a", "an", "some", "this", "for", "into", "onto", "via",
];

const ARTICLES: &[&str] = &["the", "a", "an", "some", "this"];

impl Sentence {
    pub fn parse(text: &str) -> Result<Self, SentenceError> {
        let mut segments = Vec::new();
        let mut rest = text;
        while let Some(open) = rest.find(['{', '}']) {
            if rest.as_bytes()[open] == b'}' {
                return Err(SentenceError::Unbalanced(text.into()));
            }
            if open > 0 {
                segments.push(Segment::Text(rest[..open].to_string()));
            }
            let after = &rest[open + 1..];
            let close = after.find('}').ok_or_else(|| SentenceError::Unbalanced(text.into()))?;
            let name = &after[..close];
            if name.contains('{') {
                return Err(SentenceError::Unbalanced(text.into()));
            }
            if name.trim().is_empty() {
                return Err(SentenceError::EmptyPlaceholder(text.into()));
            }
            segments.push(Segment::Placeholder(name.trim().to_string()));
            rest = &after[close + 1..];
        }
        if !rest.is_empty() {
            segments.push(Segment::Text(rest.to_string()));
        }
        Ok(Self { segments })
    }

    pub fn placeholders(&self) -> Vec<&str> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Placeholder(p) => Some(p.as_str()),
                Segment::Text(_) => None,
            })
            .collect()
    }

    /// The template with braces removed, e.g. `PERSON travels by TRANSPORTATION`.
    pub fn plain(&self) -> String {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Text(t) | Segment::Placeholder(t) => t.as_str(),
            })
            .collect()
    }

    /// Splits into leading text, subject placeholder, verb, and the remainder after the verb.
    fn split_subject_verb(&self, subject: &str) -> Result<(String, String, Vec<Segment>), SentenceError> {
        let mut segs = self.segments.iter();
        let mut lead = String::new();
        let mut first = segs.next();
        if let Some(Segment::Text(t)) = first {
            lead = t.clone();
            first = segs.next();
        }
        match first {
            Some(Segment::Placeholder(p)) if p == subject => {}
            _ => return Err(SentenceError::SubjectNotFirst(self.to_string())),
        }
        let Some(Segment::Text(after_subject)) = segs.next() else {
            return Err(SentenceError::NoVerb(self.to_string()));
        };
        let trimmed = after_subject.trim_start();
        let verb_end = trimmed.find(' ').unwrap_or(trimmed.len());
        let verb = trimmed[..verb_end].to_string();
        if verb.is_empty() {
            return Err(SentenceError::NoVerb(self.to_string()));
        }
        let mut rest = vec![Segment::Text(trimmed[verb_end..].to_string())];
        rest.extend(segs.cloned());
        Ok((lead, verb, rest))
    }

    /// The main verb (first word after the subject placeholder).
    pub fn verb(&self, subject: &str) -> Option<String> {
        self.split_subject_verb(subject).ok().map(|(_, v, _)| v)
    }

    /// Builds a category-specific reading of a default template.
    ///
    /// `determined` holds the placeholders of resource-valued positions, which receive the
    /// category's determiner.
    pub fn variant(&self, subject: &str, determined: &BTreeSet<String>, variant: LabelVariant) -> Result<Self, SentenceError> {
        let (lead, verb, rest) = self.split_subject_verb(subject)?;
        let (prefix, middle, determiner) = match variant {
            LabelVariant::Default | LabelVariant::Lexical => return Ok(self.clone()),
            LabelVariant::Assertional => ("This ".to_string(), format!(" {verb}"), Some("this")),
            LabelVariant::Contingent => ("A ".to_string(), format!(" can {}", base_form(&verb)), Some("some")),
            LabelVariant::Prototypical => ("A ".to_string(), format!(" typically {verb}"), Some("some")),
            LabelVariant::Universal => ("Every ".to_string(), format!(" necessarily {verb}"), Some("some")),
            LabelVariant::Negated => (lead, format!(" does not {}", base_form(&verb)), None),
        };
        let mut out = Vec::new();
        if !prefix.is_empty() {
            out.push(Segment::Text(prefix));
        }
        out.push(Segment::Placeholder(subject.to_string()));
        let mut pending = middle;
        for seg in rest {
            match seg {
                Segment::Text(t) => pending.push_str(&t),
                Segment::Placeholder(p) => {
                    if let Some(d) = determiner.filter(|_| determined.contains(&p)) {
                        if !pending.is_empty() && !pending.ends_with(' ') {
                            pending.push(' ');
                        }
                        pending.push_str(d);
                        pending.push(' ');
                    }
                    out.push(Segment::Text(std::mem::take(&mut pending)));
                    out.push(Segment::Placeholder(p));
                }
            }
        }
        if !pending.is_empty() {
            out.push(Segment::Text(pending));
        }
        Ok(Self { segments: out })
    }

    /// Turns a statement template into a yes/no question template.
    pub fn question(&self, subject: &str, auxiliary: &str) -> Result<Self, SentenceError> {
        let (lead, verb, rest) = self.split_subject_verb(subject)?;
        let mut out = vec![Segment::Text(format!("{auxiliary} {}", lowercase_first(&lead)))];
        out.push(Segment::Placeholder(subject.to_string()));
        let mut pending = format!(" {}", base_form(&verb));
        for seg in rest {
            match seg {
                Segment::Text(t) => pending.push_str(&t),
                Segment::Placeholder(p) => {
                    out.push(Segment::Text(std::mem::take(&mut pending)));
                    out.push(Segment::Placeholder(p));
                }
            }
        }
        let pending = pending.trim_end().trim_end_matches(['.', '!']).to_string();
        out.push(Segment::Text(format!("{pending}?")));
        Ok(Self { segments: out })
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.segments {
            match s {
                Segment::Text(t) => f.write_str(t)?,
                Segment::Placeholder(p) => write!(f, "{{{p}}}")?,
            }
        }
        Ok(())
    }
}

fn lowercase_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_lowercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn capitalize_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Base form of a third-person-singular verb: `has` to `have`, `travels` to `travel`.
pub fn base_form(verb: &str) -> String {
    match verb {
        "has" => return "have".into(),
        "is" => return "be".into(),
        "does" => return "do".into(),
        "goes" => return "go".into(),
        _ => {}
    }
    if let Some(stem) = verb.strip_suffix("ies") {
        return format!("{stem}y");
    }
    for suffix in ["sses", "shes", "ches", "xes", "zes", "oes"] {
        if verb.ends_with(suffix) {
            return verb[..verb.len() - 2].to_string();
        }
    }
    if verb.ends_with('s') && !verb.ends_with("ss") {
        return verb[..verb.len() - 1].to_string();
    }
    verb.to_string()
}

pub fn is_article(word: &str) -> bool {
    ARTICLES.contains(&word.to_ascii_lowercase().as_str())
}

pub fn is_connective(word: &str) -> bool {
    CONNECTIVES.contains(&word.to_ascii_lowercase().as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Sentence {
        Sentence::parse(t).unwrap()
    }

    #[test]
    fn parses_placeholders() {
        let t = s("{PERSON} travels by {TRANSPORTATION}");
        assert_eq!(t.placeholders(), vec!["PERSON", "TRANSPORTATION"]);
        assert_eq!(t.plain(), "PERSON travels by TRANSPORTATION");
        assert_eq!(t.to_string(), "{PERSON} travels by {TRANSPORTATION}");
        assert!(Sentence::parse("{A").is_err());
        assert!(Sentence::parse("A}").is_err());
        assert!(Sentence::parse("{}").is_err());
    }

    #[test]
    fn base_forms() {
        assert_eq!(base_form("has"), "have");
        assert_eq!(base_form("travels"), "travel");
        assert_eq!(base_form("carries"), "carry");
        assert_eq!(base_form("reaches"), "reach");
        assert_eq!(base_form("pass"), "pass");
    }

    #[test]
    fn category_variants_of_has_part() {
        let t = s("{SUBJECT} has part {PART}");
        let det: BTreeSet<String> = ["PART".to_string()].into();
        let v = |var| t.variant("SUBJECT", &det, var).unwrap().plain();
        assert_eq!(v(LabelVariant::Assertional), "This SUBJECT has part this PART");
        assert_eq!(v(LabelVariant::Contingent), "A SUBJECT can have part some PART");
        assert_eq!(v(LabelVariant::Prototypical), "A SUBJECT typically has part some PART");
        assert_eq!(v(LabelVariant::Universal), "Every SUBJECT necessarily has part some PART");
        assert_eq!(v(LabelVariant::Negated), "SUBJECT does not have part PART");
    }

    #[test]
    fn question_form() {
        let t = s("{PERSON} travels by {T} on the {D}");
        assert_eq!(t.question("PERSON", "Did").unwrap().plain(), "Did PERSON travel by T on the D?");
        let t = s("This {S} has part this {P}");
        assert_eq!(t.question("S", "Does").unwrap().plain(), "Does this S have part this P?");
    }
}
