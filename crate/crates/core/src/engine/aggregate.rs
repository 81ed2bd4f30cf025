use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::EngineError;
use crate::model::*;
use crate::spec::ApplicationInfo;

/// Restrictiveness order over licences, closed under transitivity.
#[derive(Debug, Clone, Default)]
pub struct LicenseOrder {
    above: BTreeMap<Upri, BTreeSet<Upri>>,
}

impl LicenseOrder {
    /// Builds the order from pairs `[a, b]` meaning `b` is at least as restrictive as `a`.
    pub fn new(pairs: &[[Upri; 2]]) -> Self {
        let mut above: BTreeMap<Upri, BTreeSet<Upri>> = BTreeMap::new();
        for [a, b] in pairs {
            above.entry(a.clone()).or_default().insert(b.clone());
            above.entry(b.clone()).or_default();
        }
        loop {
            let mut changed = false;
            let keys: Vec<Upri> = above.keys().cloned().collect();
            for k in keys {
                let reach: BTreeSet<Upri> = above[&k].iter().flat_map(|m| above[m].iter().cloned()).collect();
                let set = above.get_mut(&k).expect("key exists");
                let before = set.len();
                set.extend(reach);
                changed |= set.len() != before;
            }
            if !changed {
                break;
            }
        }
        Self { above }
    }

    pub fn from_application(app: &ApplicationInfo) -> Self {
        Self::new(&app.license_order)
    }

    /// Whether `b` is at least as restrictive as `a`.
    pub fn le(&self, a: &Upri, b: &Upri) -> bool {
        a == b || self.above.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn most_restrictive<'a>(&self, licenses: impl IntoIterator<Item = &'a Upri>) -> Result<Option<Upri>, EngineError> {
        let mut best: Option<&Upri> = None;
        for l in licenses {
            best = match best {
                None => Some(l),
                Some(b) if self.le(l, b) => Some(b),
                Some(b) if self.le(b, l) => Some(l),
                Some(b) => return Err(EngineError::IncomparableLicenses(b.clone(), l.clone())),
            };
        }
        Ok(best.cloned())
    }
}

/// Metadata computed on read from a unit and everything associated with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AggregatedMetadata {
    pub contributors: BTreeSet<Upri>,
    pub last_updated: Timestamp,
    pub copyright_license: Option<Upri>,
    pub access_restriction: BTreeSet<Upri>,
    pub logical_framework: BTreeSet<Upri>,
    pub imported_from: BTreeSet<Upri>,
    pub unit_count: usize,
}

/// Live units reachable from `unit` through association, including `unit`.
pub(crate) fn associated_closure(store: &Store, unit: &Upri) -> Vec<Upri> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = vec![unit.clone()];
    while let Some(next) = queue.pop() {
        if !seen.insert(next.clone()) {
            continue;
        }
        let Some(u) = store.unit(&next) else { continue };
        if u.is_deleted() && &next != unit {
            continue;
        }
        if let SemanticUnit::Compound(c) = u {
            queue.extend(c.associated.iter().rev().cloned());
        }
        out.push(next);
    }
    out
}

pub fn aggregate_dynamic_metadata(store: &Store, app: &ApplicationInfo, unit: &Upri) -> Result<AggregatedMetadata, EngineError> {
    let root = store.unit(unit).ok_or_else(|| EngineError::UnknownUnit(unit.clone()))?;
    let mut agg = AggregatedMetadata {
        contributors: BTreeSet::new(),
        last_updated: root.meta().creation_date,
        copyright_license: None,
        access_restriction: BTreeSet::new(),
        logical_framework: BTreeSet::new(),
        imported_from: BTreeSet::new(),
        unit_count: 0,
    };
    let mut licenses = BTreeSet::new();
    for id in associated_closure(store, unit) {
        let u = store.unit(&id).expect("closure only yields stored units");
        let m = u.meta();
        agg.unit_count += 1;
        agg.contributors.insert(m.creator.clone());
        agg.last_updated = agg.last_updated.max(m.creation_date);
        agg.imported_from.extend(m.imported_from.clone());
        if let SemanticUnit::Statement(s) = u {
            for p in s.current_positions() {
                agg.contributors.insert(p.creator.clone());
                agg.last_updated = agg.last_updated.max(p.creation_date);
                agg.imported_from.extend(p.imported_from.clone());
            }
            licenses.extend(s.license.clone());
            agg.access_restriction.extend(s.access_restricted_to.iter().cloned());
            agg.logical_framework.extend(s.logical_framework.clone());
        }
    }
    agg.copyright_license = LicenseOrder::from_application(app).most_restrictive(&licenses)?;
    Ok(agg)
}
