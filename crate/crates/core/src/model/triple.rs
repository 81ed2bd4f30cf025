use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Literal, Timestamp, Upri};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Term {
    Iri(Upri),
    Literal(Literal),
}

impl Term {
    pub fn iri(s: &'static str) -> Self {
        Term::Iri(Upri::from_static(s))
    }

    pub fn boolean(b: bool) -> Self {
        Term::Literal(Literal::new(if b { "true" } else { "false" }, super::Datatype::Boolean).expect("boolean"))
    }

    pub fn time(t: Timestamp) -> Self {
        Term::Literal(Literal::new(t.to_string(), super::Datatype::DateTime).expect("timestamp renders as RFC 3339"))
    }

    pub fn as_iri(&self) -> Option<&Upri> {
        match self {
            Term::Iri(u) => Some(u),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            Term::Iri(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(u) => write!(f, "<{u}>"),
            Term::Literal(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Upri,
    pub predicate: Upri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Upri, predicate: &'static str, object: Term) -> Self {
        Self { subject, predicate: Upri::from_static(predicate), object }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> {} .", self.subject, self.predicate, self.object)
    }
}
