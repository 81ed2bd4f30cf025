use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use super::OntologyClass;
use crate::model::Upri;

/// Class hierarchy of the domain ontology the specification refers to.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ontology {
    classes: BTreeMap<Upri, OntologyClass>,
    ancestors: BTreeMap<Upri, BTreeSet<Upri>>,
}

impl Serialize for Ontology {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.classes.values())
    }
}

/// Why an ontology could not be built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OntologyProblem {
    UnknownParent { class: Upri, parent: Upri },
    Cycle { class: Upri },
    Duplicate { class: Upri },
}

impl Ontology {
    pub fn new(classes: &[OntologyClass]) -> Result<Self, Vec<OntologyProblem>> {
        let mut map = BTreeMap::new();
        let mut problems = Vec::new();
        for c in classes {
            if map.insert(c.id.clone(), c.clone()).is_some() {
                problems.push(OntologyProblem::Duplicate { class: c.id.clone() });
            }
        }
        for c in classes {
            for p in &c.parents {
                if !map.contains_key(p) {
                    problems.push(OntologyProblem::UnknownParent { class: c.id.clone(), parent: p.clone() });
                }
            }
        }
        let mut ancestors = BTreeMap::new();
        for id in map.keys() {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&Upri> = map[id].parents.iter().collect();
            while let Some(next) = stack.pop() {
                if next == id {
                    problems.push(OntologyProblem::Cycle { class: id.clone() });
                    break;
                }
                if seen.insert(next.clone()) {
                    if let Some(c) = map.get(next) {
                        stack.extend(c.parents.iter());
                    }
                }
            }
            ancestors.insert(id.clone(), seen);
        }
        if problems.is_empty() {
            Ok(Self { classes: map, ancestors })
        } else {
            Err(problems)
        }
    }

    pub fn contains(&self, class: &Upri) -> bool {
        self.classes.contains_key(class)
    }

    pub fn label(&self, class: &Upri) -> Option<&str> {
        self.classes.get(class).map(|c| c.label.as_str())
    }

    /// Reflexive, transitive subclass test. Classes unknown to the ontology are only
    /// subclasses of themselves.
    pub fn is_subclass_of(&self, class: &Upri, of: &Upri) -> bool {
        class == of || self.ancestors.get(class).is_some_and(|a| a.contains(of))
    }

    pub fn classes(&self) -> impl Iterator<Item = &OntologyClass> {
        self.classes.values()
    }

    /// All known subclasses of `class`, including itself.
    pub fn subclasses(&self, class: &Upri) -> BTreeSet<Upri> {
        let mut out: BTreeSet<Upri> =
            self.ancestors.iter().filter(|(_, a)| a.contains(class)).map(|(c, _)| c.clone()).collect();
        out.insert(class.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(id: &'static str, parents: &[&'static str]) -> OntologyClass {
        OntologyClass {
            id: Upri::from_static(id),
            label: id.into(),
            parents: parents.iter().map(|p| Upri::from_static(p)).collect(),
        }
    }

    #[test]
    fn subclass_closure() {
        let o = Ontology::new(&[c("a", &[]), c("b", &["a"]), c("c", &["b"])]).unwrap();
        let u = |s| Upri::from_static(s);
        assert!(o.is_subclass_of(&u("c"), &u("a")));
        assert!(!o.is_subclass_of(&u("a"), &u("c")));
        assert!(o.is_subclass_of(&u("x"), &u("x")));
        assert_eq!(o.subclasses(&u("b")).len(), 2);
    }

    #[test]
    fn detects_cycles_and_unknown_parents() {
        let err = Ontology::new(&[c("a", &["b"]), c("b", &["a"])]).unwrap_err();
        assert!(err.iter().any(|p| matches!(p, OntologyProblem::Cycle { .. })));
        let err = Ontology::new(&[c("a", &["zz"])]).unwrap_err();
        assert!(matches!(err[0], OntologyProblem::UnknownParent { .. }));
    }
}
