use std::collections::{BTreeMap, BTreeSet};

use super::*;
use crate::spec::{
    identification_instance, identified_class_position, identified_label_position, is_identification_instance, EdgeKind,
    KgbbClass, ObjectPositionClass, ObjectType, StatementKgbbClass,
};

pub(super) struct Changes {
    pub units: BTreeMap<Upri, SemanticUnit>,
    pub resources: BTreeMap<Upri, Resource>,
    pub versions: BTreeMap<Upri, VersionNode>,
}

/// Where a unit being created gets its subject from.
#[derive(Debug, Clone)]
enum Ctx {
    Root,
    Association { compound: Upri },
    Link { subject: Upri, parent_compound: Option<Upri> },
    Reference { source: Upri },
}

#[derive(Debug, Clone)]
struct Res {
    upri: Upri,
    kind: ResourceKind,
    class: Option<Upri>,
    unit_types: Option<BTreeSet<Upri>>,
}

pub(super) struct Txn<'a> {
    spec: &'a Spec,
    base: &'a Store,
    ids: &'a mut Ids,
    prov: &'a Provenance,
    app: Upri,
    now: Timestamp,
    units: BTreeMap<Upri, SemanticUnit>,
    resources: BTreeMap<Upri, Resource>,
    versions: BTreeMap<Upri, VersionNode>,
    order: Vec<Upri>,
}

fn violation(slot: impl ToString, detail: impl Into<String>) -> EngineError {
    EngineError::ConstraintViolation { slot: slot.to_string(), detail: detail.into() }
}

impl<'a> Txn<'a> {
    pub fn new(spec: &'a Spec, base: &'a Store, ids: &'a mut Ids, prov: &'a Provenance) -> Self {
        let now = ids.now();
        let app = prov.application.clone().unwrap_or_else(|| spec.application.id.clone());
        Self {
            spec,
            base,
            ids,
            prov,
            app,
            now,
            units: BTreeMap::new(),
            resources: BTreeMap::new(),
            versions: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    pub fn finish(self) -> Changes {
        Changes { units: self.units, resources: self.resources, versions: self.versions }
    }

    pub fn staged_units(&self) -> Vec<Upri> {
        self.order.clone()
    }

    pub fn staged_resources(&self) -> Vec<Upri> {
        self.resources.keys().cloned().collect()
    }

    fn unit(&self, id: &Upri) -> Option<&SemanticUnit> {
        self.units.get(id).or_else(|| self.base.units.get(id))
    }

    fn live_unit(&self, id: &Upri) -> Result<&SemanticUnit, EngineError> {
        let u = self.unit(id).ok_or_else(|| EngineError::UnknownUnit(id.clone()))?;
        if u.is_deleted() {
            return Err(EngineError::UnitDeleted(id.clone()));
        }
        Ok(u)
    }

    fn unit_mut(&mut self, id: &Upri) -> Result<&mut SemanticUnit, EngineError> {
        if !self.units.contains_key(id) {
            let u = self.base.units.get(id).ok_or_else(|| EngineError::UnknownUnit(id.clone()))?;
            self.units.insert(id.clone(), u.clone());
        }
        Ok(self.units.get_mut(id).expect("just staged"))
    }

    fn stage(&mut self, unit: SemanticUnit) {
        self.order.push(unit.upri().clone());
        self.units.insert(unit.upri().clone(), unit);
    }

    fn all_units(&self) -> impl Iterator<Item = &SemanticUnit> {
        self.units.values().chain(self.base.units.values().filter(|u| !self.units.contains_key(u.upri())))
    }

    fn new_meta(&mut self, kgbb: &Upri, label: &str, types: BTreeSet<Upri>, subject: Option<Upri>) -> SemanticUnitMeta {
        SemanticUnitMeta {
            upri: self.ids.mint(),
            label: label.to_string(),
            types,
            subject,
            kgbb_uri: kgbb.clone(),
            creator: self.prov.creator.clone(),
            creation_date: self.now,
            created_with_application: self.app.clone(),
            imported_from: self.prov.imported_from.clone(),
            import_date: self.prov.imported_from.as_ref().map(|_| self.now),
            curator: None,
            curation_date: None,
            deleted_by: None,
            deletion_date: None,
            data_production_metadata: None,
            version_ids: BTreeSet::new(),
            dataset_unit_ids: BTreeSet::new(),
            editable: true,
            has_current_version: None,
        }
    }

    // ---- resources ----

    fn lookup(&self, id: &Upri) -> Option<Res> {
        if let Some(r) = self.resources.get(id).or_else(|| self.base.resources.get(id)) {
            return Some(Res { upri: r.upri.clone(), kind: r.kind, class: r.class_affiliation.clone(), unit_types: None });
        }
        if self.spec.ontology.contains(id) {
            return Some(Res { upri: id.clone(), kind: ResourceKind::Class, class: Some(id.clone()), unit_types: None });
        }
        self.unit(id).map(|u| Res {
            upri: id.clone(),
            kind: ResourceKind::NamedIndividual,
            class: None,
            unit_types: Some(u.meta().types.clone()),
        })
    }

    fn resolve(&mut self, r: &ResourceRef) -> Result<Res, EngineError> {
        match r {
            ResourceRef::Existing(id) => self.lookup(id).ok_or_else(|| EngineError::UnknownResource(id.clone())),
            ResourceRef::New(n) => {
                if let Some(id) = &n.upri {
                    if let Some(existing) = self.lookup(id) {
                        let same_class = n.class.is_none() || n.class == existing.class;
                        return if existing.kind == n.kind && same_class {
                            Ok(existing)
                        } else {
                            Err(EngineError::ResourceConflict(id.clone()))
                        };
                    }
                }
                let upri = match &n.upri {
                    Some(u) => u.clone(),
                    None => self.ids.mint(),
                };
                let class = if n.kind == ResourceKind::Class { n.class.clone().or_else(|| Some(upri.clone())) } else { n.class.clone() };
                let res = Resource::new(upri.clone(), n.kind, class.clone(), n.label.clone())?;
                let affiliation = if n.kind == ResourceKind::Class { None } else { class.clone() };
                let res = Resource { class_affiliation: affiliation.or(res.class_affiliation), ..res };
                self.resources.insert(upri.clone(), res.clone());
                self.identify(&res)?;
                Ok(Res { upri, kind: n.kind, class, unit_types: None })
            }
        }
    }

    /// Records a new resource's class and label in an identification unit.
    fn identify(&mut self, res: &Resource) -> Result<(), EngineError> {
        let Some(instance) = identification_instance(res.kind) else {
            return Ok(());
        };
        let class = self.spec.statement_class(&instance).expect("built-in identification KGBBs exist").clone();
        let category = match res.kind {
            ResourceKind::NamedIndividual => Category::Assertional,
            ResourceKind::SomeInstance => Category::Contingent,
            _ => Category::Universal,
        };
        let types = BTreeSet::from([class.manages.clone(), Upri::from_static(category.unit_class())]);
        let meta = self.new_meta(&instance, &class.label, types, Some(res.upri.clone()));
        let mut positions = BTreeMap::new();
        if let Some(c) = &res.class_affiliation {
            let p = self.position_instance(class.position(&identified_class_position()).unwrap(), ObjectInput::Resource(c.clone()));
            positions.insert(p.upri.clone(), p);
        }
        if let Some(l) = &res.label {
            let p = self.position_instance(class.position(&identified_label_position()).unwrap(), ObjectInput::Literal(Literal::string(l)));
            positions.insert(p.upri.clone(), p);
        }
        self.stage(SemanticUnit::Statement(StatementUnit {
            meta,
            category,
            negated: false,
            object_described_by: BTreeSet::new(),
            based_on_graph_pattern: None,
            constraint_nodes: BTreeSet::new(),
            license: self.spec.application.default_license.clone(),
            access_restricted_to: BTreeSet::new(),
            logical_framework: self.spec.application.default_logical_framework.clone(),
            confidence_level: None,
            validity_start: None,
            validity_end: None,
            references: BTreeSet::new(),
            positions,
        }));
        Ok(())
    }

    fn conforms(&self, res: &Res, class: &Upri) -> bool {
        let o = &self.spec.ontology;
        if let Some(types) = &res.unit_types {
            return types.contains(class);
        }
        match res.kind {
            ResourceKind::Class => o.is_subclass_of(&res.upri, class),
            _ => res.class.as_ref().is_some_and(|c| o.is_subclass_of(c, class)),
        }
    }

    fn position_instance(&mut self, pos: &ObjectPositionClass, input: ObjectInput) -> ObjectPositionInstance {
        ObjectPositionInstance {
            upri: self.ids.mint(),
            position_class: pos.id.clone(),
            input_type_label: pos.label.clone(),
            input,
            logical_property: pos.logical_properties.iter().copied().find(|p| p.instance_iri().is_some()),
            link: if pos.required { PositionLink::Required } else { PositionLink::Optional },
            current_version: true,
            creator: self.prov.creator.clone(),
            creation_date: self.now,
            created_with_application: self.app.clone(),
            imported_from: self.prov.imported_from.clone(),
            version_ids: BTreeSet::new(),
            dataset_unit_ids: BTreeSet::new(),
        }
    }

    fn check_input(
        &mut self,
        pos: &ObjectPositionClass,
        value: &InputValue,
        category: Category,
        extra_range: &[Upri],
    ) -> Result<ObjectInput, EngineError> {
        match (pos.object_type, value) {
            (ObjectType::Resource, InputValue::Resource(r)) => {
                let res = self.resolve(r)?;
                if res.unit_types.is_none() && !allowed_object_resource_kinds(category).allows(res.kind) {
                    return Err(EngineError::CategoryObjectMismatch { position: pos.id.clone(), kind: res.kind, category });
                }
                for class in pos.constraint.class.iter().chain(extra_range) {
                    if !self.conforms(&res, class) {
                        return Err(violation(&pos.id, format!("{} is not a {class}", res.upri)));
                    }
                }
                Ok(ObjectInput::Resource(res.upri))
            }
            (ObjectType::Literal, InputValue::Literal(l)) => {
                let c = &pos.constraint;
                let dt = c.datatype.unwrap_or(Datatype::String);
                if l.datatype() != dt {
                    return Err(violation(&pos.id, format!("expects a {dt} literal, got {}", l.datatype())));
                }
                if let Some(min) = c.min.as_ref().and_then(|m| Literal::new(m.0.clone(), dt).ok()) {
                    if l.compare_value(&min) == Some(std::cmp::Ordering::Less) {
                        return Err(violation(&pos.id, format!("{} is below the minimum {}", l.value(), min.value())));
                    }
                }
                if let Some(max) = c.max.as_ref().and_then(|m| Literal::new(m.0.clone(), dt).ok()) {
                    if l.compare_value(&max) == Some(std::cmp::Ordering::Greater) {
                        return Err(violation(&pos.id, format!("{} is above the maximum {}", l.value(), max.value())));
                    }
                }
                if let Some(p) = &c.pattern {
                    let re = regex::Regex::new(p).map_err(|e| violation(&pos.id, e.to_string()))?;
                    if !re.is_match(l.value()) {
                        return Err(violation(&pos.id, format!("{:?} does not match {p}", l.value())));
                    }
                }
                Ok(ObjectInput::Literal(l.clone()))
            }
            (ObjectType::Resource, InputValue::Literal(_)) if category == Category::Lexical => Err(violation(&pos.id, "expects a resource")),
            (ObjectType::Literal, InputValue::Resource(_)) if category == Category::Lexical => {
                Err(EngineError::CategoryObjectMismatch { position: pos.id.clone(), kind: ResourceKind::NamedIndividual, category })
            }
            (ObjectType::Resource, InputValue::Literal(_)) => Err(violation(&pos.id, "expects a resource")),
            (ObjectType::Literal, InputValue::Resource(_)) => Err(violation(&pos.id, "expects a literal")),
        }
    }

    // ---- creation ----

    pub fn create_root(&mut self, req: &CreateRequest) -> Result<Upri, EngineError> {
        let ctx = match &req.associate_with {
            Some(compound) => {
                let c = self.live_unit(compound)?;
                let kgbb = c.meta().kgbb_uri.clone();
                if c.as_compound().is_none() {
                    return Err(EngineError::WrongUnitKind { unit: compound.clone(), expected: "compound" });
                }
                if !self.spec.associations.iter().any(|n| n.source == kgbb && n.target == req.kgbb) {
                    return Err(EngineError::NotAssociable { compound: compound.clone(), kgbb: req.kgbb.clone() });
                }
                Ctx::Association { compound: compound.clone() }
            }
            None => {
                if self.spec.class_of_instance(&req.kgbb).is_none() || is_identification_instance(&req.kgbb) {
                    return Err(EngineError::UnknownKgbb(req.kgbb.clone()));
                }
                if !self.spec.is_starting_point(&req.kgbb) {
                    return Err(EngineError::NotReachable(req.kgbb.clone()));
                }
                Ctx::Root
            }
        };
        self.create(req, ctx)
    }

    fn create(&mut self, req: &CreateRequest, ctx: Ctx) -> Result<Upri, EngineError> {
        match self.spec.class_of_instance(&req.kgbb) {
            Some(KgbbClass::Statement(c)) => self.create_statement(c, req, ctx),
            Some(KgbbClass::Compound(_)) => self.create_compound(req, ctx),
            None => Err(EngineError::UnknownKgbb(req.kgbb.clone())),
        }
    }

    fn subject_from_ctx(&mut self, req: &CreateRequest, ctx: &Ctx) -> Result<Option<Res>, EngineError> {
        let given = match ctx {
            Ctx::Root => None,
            Ctx::Association { compound } => self.unit(compound).and_then(|u| u.meta().subject.clone()),
            Ctx::Link { subject, .. } => Some(subject.clone()),
            Ctx::Reference { source } => Some(source.clone()),
        };
        match given {
            Some(s) => {
                match &req.subject {
                    None => {}
                    Some(ResourceRef::Existing(r)) if r == &s => {}
                    Some(_) => return Err(violation("subject", format!("the subject is fixed to {s} by the enclosing unit"))),
                }
                self.lookup(&s).map(Some).ok_or(EngineError::UnknownResource(s))
            }
            None => match &req.subject {
                Some(r) => self.resolve(r).map(Some),
                None => Ok(None),
            },
        }
    }

    fn create_statement(&mut self, class: &'a StatementKgbbClass, req: &CreateRequest, ctx: Ctx) -> Result<Upri, EngineError> {
        let subject = self.subject_from_ctx(req, &ctx)?.ok_or_else(|| EngineError::MissingSubject { kgbb: req.kgbb.clone() })?;
        if let Some(c) = &class.subject.class {
            if !self.conforms(&subject, c) {
                return Err(violation("subject", format!("{} is not a {c}", subject.upri)));
            }
        }
        let category = if class.lexical {
            Category::Lexical
        } else {
            classify_category(subject.kind, req.category_choice)?
        };

        let parent_compound = match &ctx {
            Ctx::Association { compound } => Some(compound.clone()),
            Ctx::Link { parent_compound, .. } => parent_compound.clone(),
            _ => None,
        };
        let carry_over = match &ctx {
            Ctx::Association { compound } => {
                let ckgbb = self.unit(compound).map(|u| u.meta().kgbb_uri.clone());
                let node = self.spec.associations.iter().find(|n| Some(&n.source) == ckgbb.as_ref() && n.target == req.kgbb);
                let range = ckgbb.as_ref().and_then(|k| self.spec.class_of_instance(k)).and_then(|c| c.subject_class().cloned());
                match (node, range) {
                    (Some(n), Some(r)) => n.carry_over.iter().map(|p| (p.clone(), r.clone())).collect(),
                    _ => Vec::new(),
                }
            }
            _ => Vec::new(),
        };

        for id in req.inputs.keys() {
            if class.position(id).is_none() {
                return Err(EngineError::UnknownPosition { kgbb: req.kgbb.clone(), position: id.clone() });
            }
        }
        let mut positions = BTreeMap::new();
        let mut constraint_nodes = BTreeSet::new();
        for pos in &class.positions {
            let Some(value) = req.inputs.get(&pos.id) else {
                if pos.required {
                    return Err(EngineError::MissingRequiredPosition { kgbb: req.kgbb.clone(), position: pos.id.clone() });
                }
                continue;
            };
            let extra: Vec<Upri> = carry_over.iter().filter(|(p, _)| p == &pos.id).map(|(_, r)| r.clone()).collect();
            let input = self.check_input(pos, value, category, &extra)?;
            for r in extra {
                constraint_nodes.insert(ConstraintNode {
                    upri: self.ids.mint(),
                    has_constraint: format!("range: {r}"),
                    applies_to_object_position: pos.id.clone(),
                });
            }
            let inst = self.position_instance(pos, input);
            positions.insert(inst.upri.clone(), inst);
        }

        let mut types = BTreeSet::from([class.manages.clone(), Upri::from_static(category.unit_class())]);
        if req.negated {
            types.insert(Upri::from_static(vocab::NEGATION_UNIT));
        }
        let mut meta = self.new_meta(&req.kgbb, &class.label, types, Some(subject.upri.clone()));
        meta.data_production_metadata = req.options.data_production_metadata.clone();
        let o = &req.options;
        let unit = StatementUnit {
            meta,
            category,
            negated: req.negated,
            object_described_by: BTreeSet::new(),
            based_on_graph_pattern: o.based_on_graph_pattern.clone().or_else(|| Some(class.id.clone())),
            constraint_nodes,
            license: o.license.clone().or_else(|| self.spec.application.default_license.clone()),
            access_restricted_to: o.access_restricted_to.clone(),
            logical_framework: o.logical_framework.clone().or_else(|| self.spec.application.default_logical_framework.clone()),
            confidence_level: o.confidence_level.clone(),
            validity_start: o.validity_start,
            validity_end: o.validity_end,
            references: o.references.clone(),
            positions,
        };
        let id = unit.meta.upri.clone();
        self.stage(SemanticUnit::Statement(unit));
        if let Ctx::Association { compound } = &ctx {
            self.attach(compound, &id)?;
        }

        let mut pending: Vec<Option<&CreateRequest>> = req.cascade.iter().map(Some).collect();
        for edge in self.spec.outgoing(&req.kgbb) {
            match edge.kind {
                EdgeKind::Link => {
                    let node = self.spec.link(edge.id).expect("edge comes from a link node");
                    let object = self.current_resource(&id, &node.use_as_subject);
                    let active = !req.negated
                        && match (&object, &node.if_object) {
                            (Some(o), Some(c)) => self.lookup(o).is_some_and(|r| self.conforms(&r, c)),
                            (Some(_), None) => true,
                            (None, _) => false,
                        };
                    let children = take_matching(&mut pending, edge.target);
                    if !active {
                        if let Some(c) = children.first() {
                            return Err(EngineError::UnexpectedCascadeInput { source_kgbb: req.kgbb.clone(), kgbb: c.kgbb.clone() });
                        }
                        continue;
                    }
                    let object = object.expect("active links have an object");
                    if !edge.admits(children.len()) {
                        return Err(EngineError::MaxCountExceeded { node: edge.id.clone(), max: edge.max_count });
                    }
                    let child_ctx = Ctx::Link { subject: object.clone(), parent_compound: parent_compound.clone() };
                    let mut targets = Vec::new();
                    for c in children {
                        targets.push(self.create(c, child_ctx.clone())?);
                    }
                    while (targets.len() as u32) < edge.min_count {
                        if self.spec.compound_class(edge.target).is_none() {
                            return Err(EngineError::CascadeUnderflow {
                                node: edge.id.clone(),
                                min: edge.min_count,
                                got: targets.len() as u32,
                            });
                        }
                        let existing = self
                            .all_units()
                            .filter(|u| {
                                !u.is_deleted()
                                    && &u.meta().kgbb_uri == edge.target
                                    && u.meta().subject.as_ref() == Some(&object)
                                    && !targets.contains(u.upri())
                            })
                            .map(|u| u.upri().clone())
                            .min();
                        let t = match existing {
                            Some(t) => t,
                            None => self.create(&CreateRequest::new(edge.target.clone()), child_ctx.clone())?,
                        };
                        targets.push(t);
                    }
                    for t in targets {
                        if let SemanticUnit::Statement(s) = self.unit_mut(&id)? {
                            s.object_described_by.insert(t.clone());
                        }
                        let is_compound = self.unit(&t).is_some_and(|u| u.as_compound().is_some());
                        if let (true, Some(pc)) = (is_compound, &parent_compound) {
                            if let SemanticUnit::Compound(c) = self.unit_mut(pc)? {
                                c.linked.insert(t);
                            }
                        }
                    }
                }
                EdgeKind::Reference => {
                    let children = take_matching(&mut pending, edge.target);
                    self.create_references(&id, &edge, children)?;
                }
                EdgeKind::Association => {}
            }
        }
        if let Some(c) = pending.into_iter().flatten().next() {
            return Err(EngineError::UnexpectedCascadeInput { source_kgbb: req.kgbb.clone(), kgbb: c.kgbb.clone() });
        }
        Ok(id)
    }

    fn current_resource(&self, unit: &Upri, position: &Upri) -> Option<Upri> {
        self.unit(unit)?.as_statement()?.current(position)?.input.as_resource().cloned()
    }

    fn create_references(&mut self, source: &Upri, edge: &crate::spec::Edge<'_>, children: Vec<&CreateRequest>) -> Result<(), EngineError> {
        if !edge.admits(children.len()) {
            return Err(EngineError::MaxCountExceeded { node: edge.id.clone(), max: edge.max_count });
        }
        if (children.len() as u32) < edge.min_count {
            return Err(EngineError::CascadeUnderflow { node: edge.id.clone(), min: edge.min_count, got: children.len() as u32 });
        }
        for c in children {
            self.create(c, Ctx::Reference { source: source.clone() })?;
        }
        Ok(())
    }

    fn create_compound(&mut self, req: &CreateRequest, ctx: Ctx) -> Result<Upri, EngineError> {
        let class = self.spec.compound_class(&req.kgbb).expect("caller checked the class kind");
        let subject = self.subject_from_ctx(req, &ctx)?;
        if let Some(c) = class.subject.as_ref().and_then(|s| s.class.as_ref()) {
            match &subject {
                None => return Err(EngineError::MissingSubject { kgbb: req.kgbb.clone() }),
                Some(s) if !self.conforms(s, c) => return Err(violation("subject", format!("{} is not a {c}", s.upri))),
                Some(_) => {}
            }
        }
        if !req.inputs.is_empty() {
            return Err(violation("inputs", "compound units take no object positions"));
        }
        let meta = self.new_meta(&req.kgbb, &class.label, BTreeSet::from([class.manages.clone()]), subject.map(|s| s.upri));
        let id = meta.upri.clone();
        self.stage(SemanticUnit::Compound(CompoundUnit {
            meta,
            kind: class.compound_kind,
            associated: BTreeSet::new(),
            linked: BTreeSet::new(),
            member_order: Vec::new(),
        }));
        if let Ctx::Association { compound } = &ctx {
            self.attach(compound, &id)?;
        }
        let mut pending: Vec<Option<&CreateRequest>> = req.cascade.iter().map(Some).collect();
        for edge in self.spec.outgoing(&req.kgbb) {
            let children = take_matching(&mut pending, edge.target);
            match edge.kind {
                EdgeKind::Association => {
                    for c in &children {
                        self.create(c, Ctx::Association { compound: id.clone() })?;
                    }
                    if (children.len() as u32) < edge.min_count {
                        return Err(EngineError::CascadeUnderflow {
                            node: edge.id.clone(),
                            min: edge.min_count,
                            got: children.len() as u32,
                        });
                    }
                }
                EdgeKind::Reference => self.create_references(&id, &edge, children)?,
                EdgeKind::Link => {}
            }
        }
        if let Some(c) = pending.into_iter().flatten().next() {
            return Err(EngineError::UnexpectedCascadeInput { source_kgbb: req.kgbb.clone(), kgbb: c.kgbb.clone() });
        }
        Ok(id)
    }

    /// Adds `member` to `compound`, enforcing the association's maximum.
    fn attach(&mut self, compound: &Upri, member: &Upri) -> Result<(), EngineError> {
        let member_kgbb = self.unit(member).expect("member is staged").meta().kgbb_uri.clone();
        let ckgbb = self.live_unit(compound)?.meta().kgbb_uri.clone();
        let node = self
            .spec
            .associations
            .iter()
            .find(|n| n.source == ckgbb && n.target == member_kgbb)
            .ok_or_else(|| EngineError::NotAssociable { compound: compound.clone(), kgbb: member_kgbb.clone() })?;
        let c = self.unit(compound).and_then(SemanticUnit::as_compound).expect("checked above");
        let count = c
            .associated
            .iter()
            .filter_map(|m| self.unit(m))
            .filter(|u| !u.is_deleted() && u.meta().kgbb_uri == member_kgbb)
            .count()
            + 1;
        if node.max_count != 0 && count > node.max_count as usize {
            return Err(EngineError::MaxCountExceeded { node: node.id.clone().expect("ids are assigned"), max: node.max_count });
        }
        let dataset = (c.kind == CompoundKind::Dataset).then(|| compound.clone());
        if let SemanticUnit::Compound(c) = self.unit_mut(compound)? {
            c.associated.insert(member.clone());
            if c.kind.is_ordered() {
                c.member_order.push(member.clone());
            }
        }
        if let Some(d) = dataset {
            let m = self.unit_mut(member)?;
            m.meta_mut().dataset_unit_ids.insert(d.clone());
            if let SemanticUnit::Statement(s) = m {
                for p in s.positions.values_mut() {
                    p.dataset_unit_ids.insert(d.clone());
                }
            }
        }
        Ok(())
    }

    // ---- editing ----

    fn editable_statement(&self, unit: &Upri) -> Result<&StatementUnit, EngineError> {
        let u = self.live_unit(unit)?;
        if !u.meta().editable {
            return Err(EngineError::UnitLocked(unit.clone()));
        }
        u.as_statement().ok_or_else(|| EngineError::WrongUnitKind { unit: unit.clone(), expected: "statement" })
    }

    pub fn update_position(&mut self, unit: &Upri, position: &Upri, value: Option<&InputValue>) -> Result<Option<Upri>, EngineError> {
        let s = self.editable_statement(unit)?;
        let kgbb = s.meta.kgbb_uri.clone();
        let category = s.category;
        let extra: Vec<Upri> = s
            .constraint_nodes
            .iter()
            .filter(|c| &c.applies_to_object_position == position)
            .filter_map(ConstraintNode::range_class)
            .collect();
        let current = s.current(position).map(|p| (p.upri.clone(), p.input.clone()));
        let datasets = s.meta.dataset_unit_ids.clone();
        let class = self.spec.statement_class(&kgbb).ok_or_else(|| EngineError::UnknownKgbb(kgbb.clone()))?;
        let pos = class
            .position(position)
            .ok_or_else(|| EngineError::UnknownPosition { kgbb: kgbb.clone(), position: position.clone() })?;
        let new = match value {
            Some(v) => Some(self.check_input(pos, v, category, &extra)?),
            None if pos.required => {
                return Err(EngineError::MissingRequiredPosition { kgbb, position: position.clone() });
            }
            None => None,
        };
        if current.is_none() && new.is_none() {
            return Ok(None);
        }
        let inst = new.map(|input| {
            let mut p = self.position_instance(pos, input);
            p.dataset_unit_ids = datasets;
            p
        });
        let (creator, now) = (self.prov.creator.clone(), self.now);
        let SemanticUnit::Statement(s) = self.unit_mut(unit)? else { unreachable!() };
        if let Some((old, _)) = &current {
            s.positions.get_mut(old).expect("current instance exists").current_version = false;
        }
        s.meta.curator = Some(creator);
        s.meta.curation_date = Some(now);
        let id = inst.as_ref().map(|p| p.upri.clone());
        if let Some(p) = inst {
            s.positions.insert(p.upri.clone(), p);
        }
        Ok(id)
    }

    pub fn set_editable(&mut self, unit: &Upri, editable: bool) -> Result<(), EngineError> {
        self.live_unit(unit)?;
        self.unit_mut(unit)?.meta_mut().editable = editable;
        Ok(())
    }

    pub fn soft_delete(&mut self, unit: &Upri, cascade: bool) -> Result<Vec<Upri>, EngineError> {
        let u = self.unit(unit).ok_or_else(|| EngineError::UnknownUnit(unit.clone()))?;
        if u.is_deleted() {
            return Err(EngineError::AlreadyDeleted(unit.clone()));
        }
        if !u.meta().editable {
            return Err(EngineError::UnitLocked(unit.clone()));
        }
        let mut deleted = vec![unit.clone()];
        let mut queue = vec![unit.clone()];
        while let Some(next) = queue.pop() {
            let members = match self.unit(&next) {
                Some(SemanticUnit::Compound(c)) if cascade => c.associated.clone(),
                _ => BTreeSet::new(),
            };
            let (creator, now) = (self.prov.creator.clone(), self.now);
            let m = self.unit_mut(&next)?.meta_mut();
            m.deleted_by = Some(creator);
            m.deletion_date = Some(now);
            for member in members {
                let still_used = self.all_units().any(|p| {
                    !p.is_deleted()
                        && !deleted.contains(p.upri())
                        && p.as_compound().is_some_and(|c| c.associated.contains(&member))
                });
                let live = self.unit(&member).is_some_and(|m| !m.is_deleted());
                if live && !still_used && !deleted.contains(&member) {
                    deleted.push(member.clone());
                    queue.push(member);
                }
            }
        }
        Ok(deleted)
    }

    pub fn create_version(&mut self, unit: &Upri) -> Result<Upri, EngineError> {
        let previous = self.live_unit(unit)?.meta().has_current_version.clone();
        let v = self.ids.mint();
        self.versions.insert(
            v.clone(),
            VersionNode {
                upri: v.clone(),
                version_of: unit.clone(),
                creator: self.prov.creator.clone(),
                creation_date: self.now,
                previous,
                content_id: None,
            },
        );
        self.unit_mut(unit)?.meta_mut().has_current_version = Some(v.clone());
        let mut queue = vec![unit.clone()];
        let mut seen = BTreeSet::new();
        while let Some(next) = queue.pop() {
            if !seen.insert(next.clone()) {
                continue;
            }
            let u = self.unit_mut(&next)?;
            u.meta_mut().version_ids.insert(v.clone());
            match u {
                SemanticUnit::Statement(s) => {
                    for p in s.positions.values_mut().filter(|p| p.current_version) {
                        p.version_ids.insert(v.clone());
                    }
                }
                SemanticUnit::Compound(c) => {
                    let members: Vec<Upri> = c.associated.iter().cloned().collect();
                    for m in members {
                        if self.unit(&m).is_some_and(|u| !u.is_deleted()) {
                            queue.push(m);
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(v)
    }

    // ---- questions ----

    pub fn save_question(&mut self, draft: &crate::query::QuestionDraft) -> Result<Upri, EngineError> {
        let (bindings, mode) = crate::query::check_draft(self.spec, draft)?;
        let class = self.spec.statement_class(&draft.kgbb).expect("checked by check_draft");
        let label = format!("{} question", class.label);
        let meta = self.new_meta(&draft.kgbb, &label, BTreeSet::from([Upri::from_static(vocab::STATEMENT_QUESTION_UNIT)]), None);
        let id = meta.upri.clone();
        self.stage(SemanticUnit::Question(QuestionUnit {
            meta,
            statement_kgbb: draft.kgbb.clone(),
            subject_binding: draft.subject.clone(),
            bindings,
            mode,
        }));
        Ok(id)
    }

    pub fn save_compound_question(&mut self, tree: &QuestionTree) -> Result<Upri, EngineError> {
        for q in tree.leaves() {
            if self.unit(q).and_then(SemanticUnit::as_question).is_none() {
                return Err(EngineError::WrongUnitKind { unit: q.clone(), expected: "question" });
            }
        }
        let meta = self.new_meta(
            &Upri::from_static(vocab::COMPOUND_QUESTION_UNIT),
            "compound question",
            BTreeSet::from([Upri::from_static(vocab::COMPOUND_QUESTION_UNIT)]),
            None,
        );
        let id = meta.upri.clone();
        self.stage(SemanticUnit::CompoundQuestion(CompoundQuestionUnit { meta, tree: tree.clone() }));
        Ok(id)
    }
}

fn take_matching<'r>(pending: &mut [Option<&'r CreateRequest>], target: &Upri) -> Vec<&'r CreateRequest> {
    pending.iter_mut().filter(|p| p.is_some_and(|r| &r.kgbb == target)).filter_map(Option::take).collect()
}
