use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::EngineError;
use crate::model::*;

/// A unit as it reads at one point: the current state or a saved version.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterializedUnit {
    pub upri: Upri,
    pub kind: UnitKind,
    pub kgbb: Upri,
    pub version: Option<Upri>,
    pub subject: Option<Upri>,
    pub category: Option<Category>,
    pub negated: bool,
    pub positions: Vec<ObjectPositionInstance>,
    pub members: Vec<Upri>,
    pub linked: Vec<Upri>,
    pub meta: SemanticUnitMeta,
}

impl MaterializedUnit {
    pub fn inputs(&self) -> BTreeMap<Upri, ObjectInput> {
        self.positions.iter().map(|p| (p.position_class.clone(), p.input.clone())).collect()
    }
}

/// Reads a unit's current state, or its state at `version`.
///
/// A versioned read is fixed once the version exists: it omits curation, deletion and
/// later version bookkeeping, and shows the version's instances as current.
/// Current reads of deleted units need `include_deleted`; versioned reads always succeed.
pub fn read_unit(store: &Store, unit: &Upri, version: Option<&Upri>, include_deleted: bool) -> Result<MaterializedUnit, EngineError> {
    let u = store.unit(unit).ok_or_else(|| EngineError::UnknownUnit(unit.clone()))?;
    if let Some(v) = version {
        if !u.meta().version_ids.contains(v) {
            return Err(EngineError::UnknownVersion { unit: unit.clone(), version: v.clone() });
        }
    } else if u.is_deleted() && !include_deleted {
        return Err(EngineError::UnitDeleted(unit.clone()));
    }
    let in_view = |id: &Upri| {
        store.unit(id).is_some_and(|m| match version {
            Some(v) => m.meta().version_ids.contains(v),
            None => !m.is_deleted(),
        })
    };
    let mut out = MaterializedUnit {
        upri: unit.clone(),
        kind: u.kind(),
        kgbb: u.meta().kgbb_uri.clone(),
        version: version.cloned(),
        subject: u.meta().subject.clone(),
        category: None,
        negated: false,
        positions: Vec::new(),
        members: Vec::new(),
        linked: Vec::new(),
        meta: u.meta().clone(),
    };
    if let Some(v) = version {
        let m = &mut out.meta;
        m.curator = None;
        m.curation_date = None;
        m.deleted_by = None;
        m.deletion_date = None;
        m.editable = false;
        m.version_ids = BTreeSet::from([v.clone()]);
        m.has_current_version = Some(v.clone());
    }
    match u {
        SemanticUnit::Statement(s) => {
            out.category = Some(s.category);
            out.negated = s.negated;
            out.positions = match version {
                Some(v) => s
                    .positions_at(v)
                    .map(|p| ObjectPositionInstance { current_version: true, version_ids: BTreeSet::from([v.clone()]), ..p.clone() })
                    .collect(),
                None => s.current_positions().cloned().collect(),
            };
        }
        SemanticUnit::Compound(c) => {
            let mut members: Vec<Upri> = c.member_order.iter().filter(|m| in_view(m)).cloned().collect();
            let seen: BTreeSet<Upri> = members.iter().cloned().collect();
            members.extend(c.associated.iter().filter(|m| !seen.contains(*m) && in_view(m)).cloned());
            out.members = members;
            let cutoff = version.and_then(|v| store.versions.get(v)).map(|v| v.creation_date);
            out.linked = c
                .linked
                .iter()
                .filter(|m| {
                    store.unit(m).is_some_and(|u| match cutoff {
                        Some(t) => u.meta().creation_date <= t,
                        None => !u.is_deleted(),
                    })
                })
                .cloned()
                .collect();
        }
        _ => {}
    }
    Ok(out)
}
