//! Conversion of STEP instance models into RDF.
//!
//! The baseline part mirrors the schema one to one: every instance becomes
//! an individual, every attribute value a triple. The enrichment part adds
//! direct properties between the objects a relationship instance links, one
//! triple per property value of a property set, and flattened lists.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::diag::Diagnostic;
use crate::express::{AttributeDef, BaseType, ExpressSchema};
use crate::rdf::{BlankNode, Graph, Iri, Literal, Term};
use crate::step::{StepInstance, StepModel, StepParam};
use crate::tbox::{derive_relationship_properties, Provenance};
use crate::vocab::{self, encode_iri_component, lower_first, owl, rdf, rdfs, xsd, Namespaces};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Ifcowl,
    Ifcwod,
    Both,
}

impl Mode {
    fn baseline(self) -> bool {
        matches!(self, Mode::Ifcowl | Mode::Both)
    }

    fn enrichment(self) -> bool {
        matches!(self, Mode::Ifcwod | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ifcowl" => Ok(Mode::Ifcowl),
            "ifcwod" => Ok(Mode::Ifcwod),
            "both" => Ok(Mode::Both),
            other => Err(format!(
                "unknown mode {other:?}, expected ifcowl, ifcwod or both"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ifcowl => "ifcowl",
            Mode::Ifcwod => "ifcwod",
            Mode::Both => "both",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueNodePolicy {
    AlwaysNode,
    LiteralUnlessUnit,
}

#[derive(Clone, Debug)]
pub struct ConversionConfig {
    pub mode: Mode,
    /// Instance IRIs are `{base}{Entity}_{id}`.
    pub base: String,
    pub flatten_fixed_lists: bool,
    pub value_node_policy: ValueNodePolicy,
    pub namespaces: Namespaces,
}

pub const DEFAULT_BASE: &str = "http://example.org/ifc/";

impl Default for ConversionConfig {
    fn default() -> Self {
        ConversionConfig {
            mode: Mode::Both,
            base: DEFAULT_BASE.to_string(),
            flatten_fixed_lists: true,
            value_node_policy: ValueNodePolicy::LiteralUnlessUnit,
            namespaces: Namespaces::default(),
        }
    }
}

impl ConversionConfig {
    pub fn with_mode(mode: Mode) -> Self {
        ConversionConfig {
            mode,
            ..ConversionConfig::default()
        }
    }
}

/// Lists that get one named property per position.
const FLATTEN: [(&str, &str, [&str; 3]); 1] = [(
    "IfcCartesianPoint",
    "Coordinates",
    ["coordinateX", "coordinateY", "coordinateZ"],
)];

#[derive(Clone, Debug, Default)]
pub struct Conversion {
    pub graph: Graph,
    /// Property declarations minted for property sets with no forged
    /// counterpart. Also contained in `graph`.
    pub minted: Graph,
    pub diagnostics: Vec<Diagnostic>,
    /// Complex properties that contain themselves, directly or not.
    pub complex_cycles: Vec<Vec<u64>>,
}

pub fn instance_iri(base: &str, entity: &str, id: u64) -> Iri {
    Iri::new(format!("{base}{}_{id}", encode_iri_component(entity))).expect("instance IRI")
}

struct Ctx<'a> {
    model: &'a StepModel,
    schema: &'a ExpressSchema,
    cfg: &'a ConversionConfig,
    ns: &'a Namespaces,
    names: HashMap<&'a str, String>,
    attrs: HashMap<String, Vec<(String, AttributeDef)>>,
    object_properties: BTreeSet<Iri>,
    individuals: BTreeSet<Iri>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Ctx<'a> {
    fn entity_name<'s>(&'s self, inst: &'s StepInstance) -> &'s str {
        self.names
            .get(inst.keyword.as_str())
            .map_or(inst.keyword.as_str(), String::as_str)
    }

    fn iri_of(&self, id: u64) -> Option<Iri> {
        let inst = self.model.get(id)?;
        Some(instance_iri(&self.cfg.base, self.entity_name(inst), id))
    }

    fn attributes(&mut self, entity: &str) -> &[(String, AttributeDef)] {
        if !self.attrs.contains_key(entity) {
            let list = self
                .schema
                .all_attributes(entity)
                .into_iter()
                .map(|(e, a)| (e.name.clone(), a.clone()))
                .collect();
            self.attrs.insert(entity.to_string(), list);
        }
        &self.attrs[entity]
    }

    fn param<'m>(&mut self, inst: &'m StepInstance, attr: &str) -> Option<&'m StepParam> {
        let entity = self.entity_name(inst).to_string();
        let idx = self
            .attributes(&entity)
            .iter()
            .position(|(_, a)| a.name.eq_ignore_ascii_case(attr))?;
        inst.params.get(idx)
    }

    fn warn(&mut self, inst: &StepInstance, msg: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::warning(format!("#{}: {}", inst.id, msg.into())).at(inst.line));
    }

    fn is_a(&self, id: u64, entity: &str) -> bool {
        self.model
            .get(id)
            .is_some_and(|i| self.schema.is_subtype_of(self.entity_name(i), entity))
    }

    fn value(&mut self, inst: &StepInstance, param: &StepParam, expected: &str) -> Option<Term> {
        match param {
            StepParam::Reference(id) => {
                let iri = self.iri_of(*id);
                if iri.is_none() {
                    self.warn(inst, format!("reference to missing #{id} dropped"));
                }
                iri.map(Term::Iri)
            }
            _ => {
                let (term, diag) = map_value(param, expected, self.schema, self.ns);
                if let Some(d) = diag {
                    self.warn(inst, d.message);
                }
                term
            }
        }
    }
}

/// Convert a model. `tbox` supplies the forged property-set properties;
/// relationship properties are derived from `schema`.
pub fn convert(
    model: &StepModel,
    schema: &ExpressSchema,
    tbox: &Graph,
    cfg: &ConversionConfig,
) -> Conversion {
    let ns = &cfg.namespaces;
    let mut ctx = Ctx {
        model,
        schema,
        cfg,
        ns,
        names: HashMap::new(),
        attrs: HashMap::new(),
        object_properties: tbox
            .matching(
                None,
                Some(&rdf::type_()),
                Some(&owl::object_property().into()),
            )
            .filter_map(|t| t.subject().as_iri().cloned())
            .collect(),
        individuals: tbox
            .matching(
                None,
                Some(&rdf::type_()),
                Some(&owl::named_individual().into()),
            )
            .filter_map(|t| t.subject().as_iri().cloned())
            .collect(),
        diagnostics: Vec::new(),
    };
    for inst in model.instances.values() {
        if !ctx.names.contains_key(inst.keyword.as_str()) {
            let name = schema
                .entity(&inst.keyword)
                .map_or_else(|| inst.keyword.clone(), |e| e.name.clone());
            ctx.names.insert(inst.keyword.as_str(), name);
        }
    }

    let mut out = Conversion::default();
    let mut graph = Graph::new();
    ns.register_standard_prefixes(&mut graph);
    for (p, iri) in tbox.prefixes() {
        let _ = graph.register_prefix(p, iri.as_str());
    }
    let _ = graph.register_prefix("", &cfg.base);

    if cfg.mode.baseline() {
        baseline(&mut ctx, &mut graph);
    }
    if cfg.mode.enrichment() {
        relationships(&mut ctx, &mut graph);
        property_sets(&mut ctx, &mut graph, &mut out);
        lists(&mut ctx, &mut graph);
    }
    out.graph = graph;
    out.graph.extend(&out.minted);
    out.diagnostics = ctx.diagnostics;
    out
}

fn baseline(ctx: &mut Ctx<'_>, g: &mut Graph) {
    let ns = ctx.ns;
    for inst in ctx.model.instances.values() {
        let entity = ctx.entity_name(inst).to_string();
        let subject = instance_iri(&ctx.cfg.base, &entity, inst.id);
        g.add(subject.clone(), &rdf::type_(), ns.ifcowl(&entity));
        if ctx.schema.entity(&entity).is_none() {
            ctx.warn(
                inst,
                format!("{} is not in the schema, attributes skipped", inst.keyword),
            );
            continue;
        }
        let attrs = ctx.attributes(&entity).to_vec();
        if attrs.len() != inst.params.len() {
            ctx.warn(
                inst,
                format!(
                    "{entity} expects {} parameters, found {}",
                    attrs.len(),
                    inst.params.len()
                ),
            );
        }
        for ((owner, attr), param) in attrs.iter().zip(&inst.params) {
            let pred = ns.ifcowl(&format!("{}_of_{}", attr.name, owner));
            let mut leaves = Vec::new();
            flatten(param, &mut leaves);
            for leaf in leaves {
                if let Some(v) = ctx.value(inst, leaf, &attr.type_name) {
                    g.add(subject.clone(), &pred, v);
                }
            }
        }
    }
}

fn flatten<'p>(param: &'p StepParam, out: &mut Vec<&'p StepParam>) {
    match param {
        StepParam::List(items) => items.iter().for_each(|p| flatten(p, out)),
        StepParam::Unset | StepParam::Derived => {}
        other => out.push(other),
    }
}

fn relationships(ctx: &mut Ctx<'_>, g: &mut Graph) {
    let forged = derive_relationship_properties(ctx.schema, ctx.ns);
    let mut by_relationship: BTreeMap<String, Vec<(Iri, String, String, String)>> = BTreeMap::new();
    for p in forged.properties {
        if let Provenance::Relationship {
            entity,
            relationship,
            for_attribute,
            counterpart,
            ..
        } = p.provenance
        {
            by_relationship.entry(relationship).or_default().push((
                p.iri,
                entity,
                for_attribute,
                counterpart,
            ));
        }
    }
    for inst in ctx.model.instances.values() {
        let entity = ctx.entity_name(inst).to_string();
        if ctx.schema.entity(&entity).is_none() {
            continue;
        }
        for (rel, props) in &by_relationship {
            if !ctx.schema.is_subtype_of(&entity, rel) {
                continue;
            }
            for (pred, domain, for_attr, counterpart) in props {
                let xs = ctx
                    .param(inst, for_attr)
                    .map(StepParam::references)
                    .unwrap_or_default();
                let ys = ctx
                    .param(inst, counterpart)
                    .map(StepParam::references)
                    .unwrap_or_default();
                if xs.is_empty() || ys.is_empty() {
                    ctx.warn(
                        inst,
                        format!(
                            "{entity}: {for_attr} or {counterpart} unset, no {} triple",
                            pred.as_str()
                        ),
                    );
                    continue;
                }
                for &x in &xs {
                    if !ctx.is_a(x, domain) {
                        continue;
                    }
                    let Some(xi) = ctx.iri_of(x) else { continue };
                    for &y in &ys {
                        if let Some(yi) = ctx.iri_of(y) {
                            g.add(xi.clone(), pred, yi);
                        }
                    }
                }
            }
        }
    }
}

/// Which core property a property instance maps under.
fn property_kind(schema: &ExpressSchema, entity: &str) -> Option<&'static str> {
    const KINDS: [(&str, &str); 5] = [
        ("IfcPropertySingleValue", "hasSingleValue"),
        ("IfcPropertyEnumeratedValue", "hasEnumeratedValue"),
        ("IfcPropertyListValue", "hasListValue"),
        ("IfcPropertyBoundedValue", "hasBoundedValue"),
        ("IfcPropertyReferenceValue", "hasReferenceValue"),
    ];
    KINDS
        .iter()
        .find(|(e, _)| schema.is_subtype_of(entity, e))
        .map(|(_, k)| *k)
}

fn property_sets(ctx: &mut Ctx<'_>, g: &mut Graph, out: &mut Conversion) {
    let ns = ctx.ns;
    let complex_pred = ns.ifcwod("hasComplexProperty");
    let mut complex_edges: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    // property id -> (set name, holder id)
    let mut work: Vec<(String, u64, u64)> = Vec::new();

    for inst in ctx.model.instances.values() {
        let entity = ctx.entity_name(inst).to_string();
        if !ctx.schema.is_subtype_of(&entity, "IfcPropertySet") {
            continue;
        }
        let Some(name) = ctx
            .param(inst, "Name")
            .and_then(StepParam::as_str)
            .map(str::to_string)
        else {
            ctx.warn(inst, "property set without a Name, skipped");
            continue;
        };
        for m in ctx
            .param(inst, "HasProperties")
            .map(StepParam::references)
            .unwrap_or_default()
        {
            work.push((name.clone(), inst.id, m));
        }
    }

    let mut seen_complex = BTreeSet::new();
    while let Some((set_name, holder, member)) = work.pop() {
        let Some(m) = ctx.model.get(member) else {
            continue;
        };
        let Some(holder_iri) = ctx.iri_of(holder) else {
            continue;
        };
        let entity = ctx.entity_name(m).to_string();
        if ctx.schema.is_subtype_of(&entity, "IfcComplexProperty") {
            if member == holder {
                ctx.warn(m, "complex property lists itself, self reference dropped");
                complex_edges.entry(holder).or_default().push(member);
                continue;
            }
            if ctx.model.get(holder).is_some_and(|h| {
                ctx.schema
                    .is_subtype_of(ctx.entity_name(h), "IfcComplexProperty")
            }) {
                complex_edges.entry(holder).or_default().push(member);
            }
            let mi = ctx.iri_of(member).expect("member exists");
            g.add(holder_iri, &complex_pred, mi);
            if seen_complex.insert(member) {
                for sub in ctx
                    .param(m, "HasProperties")
                    .map(StepParam::references)
                    .unwrap_or_default()
                {
                    work.push((set_name.clone(), member, sub));
                }
            }
            continue;
        }
        let Some(kind) = property_kind(ctx.schema, &entity) else {
            ctx.warn(m, format!("{entity} is not a mapped property kind"));
            continue;
        };
        let Some(prop_name) = ctx
            .param(m, "Name")
            .and_then(StepParam::as_str)
            .map(str::to_string)
        else {
            ctx.warn(m, "property without a Name, skipped");
            continue;
        };
        let pred = property_predicate(ctx, &set_name, &prop_name, kind, out);
        let forged_ns = ns.pset_namespace(&set_name);
        let unit = ctx
            .param(m, "Unit")
            .and_then(StepParam::as_reference)
            .and_then(|u| ctx.iri_of(u));

        let values: Vec<&StepParam> = match kind {
            "hasSingleValue" => ctx.param(m, "NominalValue").into_iter().collect(),
            "hasEnumeratedValue" => {
                let mut v = Vec::new();
                if let Some(p) = ctx.param(m, "EnumerationValues") {
                    flatten(p, &mut v);
                }
                v
            }
            "hasListValue" => {
                let mut v = Vec::new();
                if let Some(p) = ctx.param(m, "ListValues") {
                    flatten(p, &mut v);
                }
                v
            }
            "hasBoundedValue" => ["LowerBoundValue", "UpperBoundValue"]
                .iter()
                .filter_map(|a| ctx.param(m, a))
                .collect(),
            _ => ctx.param(m, "PropertyReference").into_iter().collect(),
        };
        for (i, v) in values.into_iter().enumerate() {
            if v.is_unset() {
                continue;
            }
            if kind == "hasEnumeratedValue" {
                if let Some(term) = enumerated_value(ctx, v, &forged_ns) {
                    g.add(holder_iri.clone(), &pred, term);
                    continue;
                }
            }
            let Some(lit) = ctx.value(m, v, "") else {
                continue;
            };
            let as_node = matches!(v, StepParam::Typed(..))
                && (unit.is_some() || ctx.cfg.value_node_policy == ValueNodePolicy::AlwaysNode);
            if !as_node || lit.as_iri().is_some() {
                g.add(holder_iri.clone(), &pred, lit);
                continue;
            }
            let node =
                BlankNode::new(format!("v{}_{}_{}", holder, member, i)).expect("blank label");
            g.add(holder_iri.clone(), &pred, node.clone());
            if let StepParam::Typed(kw, _) = v {
                let t = ctx.schema.canonical_name(kw).to_string();
                g.add(node.clone(), &rdf::type_(), ns.ifcowl(&t));
            }
            g.add(node.clone(), &ns.ifcwod("value"), lit);
            if let Some(u) = &unit {
                g.add(node, &ns.ifcwod("hasUnit"), u.clone());
            }
        }
    }

    out.complex_cycles = find_cycles(&complex_edges);
    for cycle in &out.complex_cycles {
        let ids: Vec<String> = cycle.iter().map(|i| format!("#{i}")).collect();
        ctx.diagnostics.push(Diagnostic::error(format!(
            "complex property cycle {} violates irreflexivity",
            ids.join(" -> ")
        )));
    }
}

fn enumerated_value(ctx: &Ctx<'_>, v: &StepParam, forged_ns: &str) -> Option<Term> {
    let label = match v {
        StepParam::Typed(_, inner) => match inner.as_ref() {
            StepParam::String(s) | StepParam::Enum(s) => s.clone(),
            _ => return None,
        },
        StepParam::Enum(s) | StepParam::String(s) => s.clone(),
        _ => return None,
    };
    let iri = Iri::new(format!("{forged_ns}{}", encode_iri_component(&label))).ok()?;
    ctx.individuals.contains(&iri).then_some(Term::Iri(iri))
}

/// The forged property when the TBox declares it, else a minted one.
fn property_predicate(
    ctx: &mut Ctx<'_>,
    set_name: &str,
    prop_name: &str,
    kind: &str,
    out: &mut Conversion,
) -> Iri {
    let local = encode_iri_component(&lower_first(prop_name));
    let forged = Iri::new(format!("{}{local}", ctx.ns.pset_namespace(set_name))).expect("pset IRI");
    if ctx.object_properties.contains(&forged) {
        return forged;
    }
    let minted = Iri::new(format!(
        "{}psd/{}#{local}",
        ctx.cfg.base,
        encode_iri_component(set_name)
    ))
    .expect("minted IRI");
    if !out.minted.has(
        &minted.clone().into(),
        &rdf::type_(),
        &owl::object_property().into(),
    ) {
        out.minted
            .add(minted.clone(), &rdf::type_(), owl::object_property());
        out.minted
            .add(minted.clone(), &rdfs::label(), Literal::string(prop_name));
        out.minted.add(
            minted.clone(),
            &rdfs::sub_property_of(),
            ctx.ns.ifcwod(kind),
        );
    }
    minted
}

fn find_cycles(edges: &BTreeMap<u64, Vec<u64>>) -> Vec<Vec<u64>> {
    // Tarjan would be overkill: report each strongly connected loop once by
    // walking from every node and recording the first revisit.
    let mut cycles: BTreeSet<Vec<u64>> = BTreeSet::new();
    for &start in edges.keys() {
        let mut stack = vec![(start, vec![start])];
        let mut visited = BTreeSet::new();
        while let Some((node, path)) = stack.pop() {
            for &next in edges.get(&node).into_iter().flatten() {
                if next == start {
                    let mut c = path.clone();
                    let min_pos = c
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, v)| **v)
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    c.rotate_left(min_pos);
                    cycles.insert(c);
                } else if visited.insert(next) {
                    let mut p = path.clone();
                    p.push(next);
                    stack.push((next, p));
                }
            }
        }
    }
    cycles.into_iter().collect()
}

fn lists(ctx: &mut Ctx<'_>, g: &mut Graph) {
    let ns = ctx.ns;
    for inst in ctx.model.instances.values() {
        let entity = ctx.entity_name(inst).to_string();
        if ctx.schema.entity(&entity).is_none() {
            continue;
        }
        let subject = instance_iri(&ctx.cfg.base, &entity, inst.id);
        let attrs = ctx.attributes(&entity).to_vec();
        for ((_, attr), param) in attrs.iter().zip(&inst.params) {
            if !attr.is_ordered() {
                continue;
            }
            let Some(items) = param.as_list() else {
                continue;
            };
            let rule = FLATTEN.iter().find(|(e, a, _)| {
                ctx.schema.is_subtype_of(&entity, e) && attr.name.eq_ignore_ascii_case(a)
            });
            if let Some((_, _, names)) = rule {
                if ctx.cfg.flatten_fixed_lists && items.len() <= names.len() {
                    for (item, name) in items.iter().zip(names) {
                        if let Some(v) = ctx.value(inst, item, &attr.type_name) {
                            g.add(subject.clone(), &ns.ifcwod(name), v);
                        }
                    }
                    continue;
                }
            }
            let stem = lower_first(&attr.name);
            indexed(ctx, g, inst, &subject, &stem, items, &attr.type_name);
        }
    }
}

fn indexed(
    ctx: &mut Ctx<'_>,
    g: &mut Graph,
    inst: &StepInstance,
    subject: &Iri,
    stem: &str,
    items: &[StepParam],
    ty: &str,
) {
    for (i, item) in items.iter().enumerate() {
        let name = format!("{stem}_{}", i + 1);
        match item {
            StepParam::List(inner) => indexed(ctx, g, inst, subject, &name, inner, ty),
            other => {
                if let Some(v) = ctx.value(inst, other, ty) {
                    g.add(subject.clone(), &ctx.ns.ifcwod(&name), v);
                }
            }
        }
    }
}

/// Map a leaf parameter to an RDF term. `expected_type` is the declared
/// attribute type (empty when unknown). Mismatches still produce a
/// literal, together with a diagnostic.
pub fn map_value(
    param: &StepParam,
    expected_type: &str,
    schema: &ExpressSchema,
    ns: &Namespaces,
) -> (Option<Term>, Option<Diagnostic>) {
    let (type_name, leaf) = match param {
        StepParam::Unset | StepParam::Derived => return (None, None),
        StepParam::Reference(id) => {
            return (
                None,
                Some(Diagnostic::warning(format!(
                    "#{id} is a reference, not a value"
                ))),
            )
        }
        StepParam::List(_) => {
            return (
                None,
                Some(Diagnostic::warning("aggregate is not a single value")),
            )
        }
        StepParam::Typed(kw, inner) => (schema.canonical_name(kw).to_string(), inner.as_ref()),
        other => (expected_type.to_string(), other),
    };
    let mut diag = None;
    if let StepParam::Typed(..) = param {
        if !expected_type.is_empty()
            && schema.resolve_base_type(expected_type)
                != BaseType::Unknown(expected_type.to_string())
            && !schema.type_conforms(&type_name, expected_type)
        {
            diag = Some(Diagnostic::warning(format!(
                "{type_name} value where {expected_type} is declared"
            )));
        }
    }
    let base = if type_name.is_empty() {
        BaseType::Unknown(String::new())
    } else {
        schema.resolve_base_type(&type_name)
    };
    let mismatch = |what: &str| Some(Diagnostic::warning(format!("{what} value for {type_name}")));
    let term = match (leaf, &base) {
        (StepParam::Enum(e), BaseType::Enumeration(en)) => {
            let def = schema.enumeration(en).expect("resolved enumeration");
            match def.items.iter().find(|i| i.eq_ignore_ascii_case(e)) {
                Some(item) => Term::Iri(ns.ifcowl(item)),
                None => {
                    diag = Some(Diagnostic::warning(format!(".{e}. is not an item of {en}")));
                    Literal::string(e).into()
                }
            }
        }
        (StepParam::Enum(e), _) => match (e.as_str(), &base) {
            ("T", _) => Literal::typed("true", xsd::boolean()).into(),
            ("F", _) => Literal::typed("false", xsd::boolean()).into(),
            ("U", BaseType::Logical) => Literal::string("UNKNOWN").into(),
            _ => {
                diag = Some(Diagnostic::warning(format!(
                    ".{e}. could not be resolved to an enumeration item"
                )));
                Literal::string(e).into()
            }
        },
        (StepParam::Integer(n), b) => {
            if matches!(
                b,
                BaseType::String | BaseType::Boolean | BaseType::Logical | BaseType::Entity(_)
            ) {
                diag = diag.or(mismatch("integer"));
            }
            Literal::typed(n.to_string(), xsd::integer()).into()
        }
        (StepParam::Real { lexical, .. }, b) => {
            if matches!(
                b,
                BaseType::Integer | BaseType::String | BaseType::Boolean | BaseType::Entity(_)
            ) {
                diag = diag.or(mismatch("real"));
            }
            real_literal(lexical).into()
        }
        (StepParam::String(s), b) => {
            if matches!(
                b,
                BaseType::Integer
                    | BaseType::Real
                    | BaseType::Number
                    | BaseType::Boolean
                    | BaseType::Entity(_)
            ) {
                diag = diag.or(mismatch("string"));
            }
            Literal::string(s).into()
        }
        (StepParam::Binary(h), _) => Literal::typed(
            h,
            Iri::new(format!("{}hexBinary", vocab::XSD)).expect("xsd"),
        )
        .into(),
        (StepParam::Reference(_) | StepParam::List(_) | StepParam::Typed(..), _) => {
            return (
                None,
                Some(Diagnostic::warning(format!(
                    "{type_name} wraps a non-leaf value"
                ))),
            )
        }
        (StepParam::Unset | StepParam::Derived, _) => return (None, diag),
    };
    (Some(term), diag)
}

/// Reals without an exponent become `xsd:decimal`, others `xsd:double`.
pub fn real_literal(lexical: &str) -> Literal {
    if lexical.contains(['E', 'e']) {
        return Literal::typed(lexical, xsd::double());
    }
    let (sign, digits) = match lexical.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", lexical.strip_prefix('+').unwrap_or(lexical)),
    };
    let mut s = String::from(sign);
    if digits.starts_with('.') {
        s.push('0');
    }
    s.push_str(digits);
    if s.ends_with('.') {
        s.push('0');
    }
    Literal::typed(s, xsd::decimal())
}
