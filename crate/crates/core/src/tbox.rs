//! Ontology generation: the fixed property core, properties derived from
//! EXPRESS inverse attributes, and properties derived from PSD documents.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diag::Diagnostic;
use crate::express::{collect_inverse_tuples, ExpressSchema};
use crate::psd::{PropertyType, PsdDocument};
use crate::rdf::{Graph, Iri, Literal, Term};
use crate::vocab::{self, lower_first, owl, rdf, rdfs, Namespaces};

/// Table of the core property hierarchy: name, domains, ranges, parent.
/// A parent of `None` means `owl:topObjectProperty`.
type CoreEntry = (
    &'static str,
    &'static [&'static str],
    &'static [&'static str],
    Option<&'static str>,
);

const CORE: [CoreEntry; 8] = [
    (
        "hasSimpleProperty",
        &["IfcPropertySet", "IfcComplexProperty"],
        &["IfcValue", "ENUMERATION", "IfcObjectReferenceSelect"],
        None,
    ),
    (
        "hasComplexProperty",
        &["IfcPropertySet", "IfcComplexProperty"],
        &["IfcComplexProperty"],
        None,
    ),
    (
        "hasReferenceValue",
        &[],
        &["IfcObjectReferenceSelect"],
        Some("hasSimpleProperty"),
    ),
    (
        "hasSingleValue",
        &[],
        &["IfcValue"],
        Some("hasSimpleProperty"),
    ),
    (
        "hasListValue",
        &[],
        &["IfcValue"],
        Some("hasSimpleProperty"),
    ),
    (
        "hasEnumeratedValue",
        &[],
        &["ENUMERATION"],
        Some("hasSimpleProperty"),
    ),
    (
        "hasTableValue",
        &[],
        &["IfcValue"],
        Some("hasSimpleProperty"),
    ),
    (
        "hasBoundedValue",
        &[],
        &["IfcValue"],
        Some("hasSimpleProperty"),
    ),
];

/// Datatype properties used by the instance converter for value nodes and
/// flattened coordinates.
const CORE_DATATYPE: [&str; 4] = ["value", "coordinateX", "coordinateY", "coordinateZ"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Core,
    Relationship {
        entity: String,
        inverse_attr: String,
        relationship: String,
        for_attribute: String,
        counterpart: String,
    },
    Pset {
        pset: String,
        property: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedProperty {
    pub iri: Iri,
    pub label: String,
    pub domain: Option<Iri>,
    pub range: Iri,
    /// Core parent for pset properties.
    pub parent: Option<Iri>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default)]
pub struct Forged {
    pub graph: Graph,
    pub properties: Vec<DerivedProperty>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Forged {
    fn new(ns: &Namespaces) -> Self {
        let mut graph = Graph::new();
        ns.register_standard_prefixes(&mut graph);
        Forged {
            graph,
            ..Forged::default()
        }
    }

    /// Union of several forged parts. Properties declared by more than one
    /// part with different provenance are reported.
    pub fn merge(parts: impl IntoIterator<Item = Forged>) -> Forged {
        let mut out = Forged::default();
        let mut seen: BTreeMap<Iri, Provenance> = BTreeMap::new();
        for part in parts {
            out.graph.extend(&part.graph);
            out.diagnostics.extend(part.diagnostics);
            for p in part.properties {
                match seen.get(&p.iri) {
                    Some(prev) if *prev != p.provenance => {
                        out.diagnostics.push(Diagnostic::error(format!(
                            "{} declared twice with different provenance",
                            p.iri.as_str()
                        )))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(p.iri.clone(), p.provenance.clone());
                        out.properties.push(p);
                    }
                }
            }
        }
        out
    }
}

/// Core hierarchy, the relationship properties of `schema` and the
/// properties of every document, merged.
pub fn build_tbox(schema: Option<&ExpressSchema>, psds: &[PsdDocument], ns: &Namespaces) -> Forged {
    let mut core = Forged::new(ns);
    core.graph.extend(&core_tbox(ns));
    let mut parts = vec![core];
    if let Some(s) = schema {
        parts.push(derive_relationship_properties(s, ns));
    }
    parts.extend(psds.iter().map(|d| map_psd(d, ns)));
    let mut out = Forged::merge(parts);
    ns.register_standard_prefixes(&mut out.graph);
    out
}

/// The fixed property hierarchy plus `hasUnit`.
pub fn core_tbox(ns: &Namespaces) -> Graph {
    let mut g = Graph::new();
    ns.register_standard_prefixes(&mut g);
    for (name, domains, ranges, parent) in CORE {
        let p = ns.ifcwod(name);
        g.add(p.clone(), &rdf::type_(), owl::object_property());
        g.add(p.clone(), &rdfs::label(), Literal::string(name));
        let parent = parent.map_or_else(owl::top_object_property, |n| ns.ifcwod(n));
        g.add(p.clone(), &rdfs::sub_property_of(), parent);
        for d in domains {
            g.add(p.clone(), &rdfs::domain(), ns.ifcowl(d));
        }
        for r in ranges {
            g.add(p.clone(), &rdfs::range(), ns.ifcowl(r));
        }
    }
    g.add(
        ns.ifcwod("hasComplexProperty"),
        &rdf::type_(),
        owl::irreflexive_property(),
    );

    let unit = ns.ifcwod("hasUnit");
    g.add(unit.clone(), &rdf::type_(), owl::object_property());
    g.add(unit.clone(), &rdfs::label(), Literal::string("hasUnit"));
    g.add(unit.clone(), &rdfs::domain(), ns.ifcowl("IfcValue"));
    g.add(unit, &rdfs::range(), ns.ifcowl("IfcUnit"));

    for name in CORE_DATATYPE {
        let p = ns.ifcwod(name);
        g.add(p.clone(), &rdf::type_(), owl::datatype_property());
        g.add(p, &rdfs::label(), Literal::string(name));
    }
    g
}

/// One object property `ifcwod:{p}_{e}` per inverse attribute declared on
/// `e` whose relationship entity descends from `IfcRelationship`.
///
/// Inverse attributes inherited from supertypes are derived once, on the
/// entity that declares them.
pub fn derive_relationship_properties(schema: &ExpressSchema, ns: &Namespaces) -> Forged {
    let mut out = Forged::new(ns);
    for entity in schema.entities() {
        if entity.inverses.is_empty() {
            continue;
        }
        let tuples = collect_inverse_tuples(schema, &entity.name).expect("entity exists");
        out.diagnostics.extend(
            tuples
                .skipped
                .iter()
                .filter(|d| d.message.starts_with(&format!("{}.", entity.name)))
                .cloned(),
        );
        for t in tuples.tuples.values() {
            if t.declared_on != entity.name {
                continue;
            }
            if !schema.is_subtype_of(&t.relationship, "IfcRelationship") {
                out.diagnostics.push(Diagnostic::warning(format!(
                    "{}.{}: {} is not a subtype of IfcRelationship, skipped",
                    entity.name, t.inverse_name, t.relationship
                )));
                continue;
            }
            let known = schema.entity(&t.range).is_some()
                || schema.select(&t.range).is_some()
                || schema.enumeration(&t.range).is_some()
                || schema.defined_type(&t.range).is_some();
            if !known {
                out.diagnostics.push(Diagnostic::warning(format!(
                    "{}.{}: range {} is not declared in the schema, emitted as an external class",
                    entity.name, t.inverse_name, t.range
                )));
            }
            let iri = ns.ifcwod(&format!("{}_{}", t.property, entity.name));
            let domain = ns.ifcowl(&entity.name);
            let range = ns.ifcowl(&t.range);
            let g = &mut out.graph;
            g.add(iri.clone(), &rdf::type_(), owl::object_property());
            g.add(iri.clone(), &rdfs::domain(), domain.clone());
            g.add(iri.clone(), &rdfs::range(), range.clone());
            g.add(iri.clone(), &rdfs::label(), Literal::string(&t.property));
            out.properties.push(DerivedProperty {
                iri,
                label: t.property.clone(),
                domain: Some(domain),
                range,
                parent: None,
                provenance: Provenance::Relationship {
                    entity: entity.name.clone(),
                    inverse_attr: t.inverse_name.clone(),
                    relationship: t.relationship.clone(),
                    for_attribute: t.for_attribute.clone(),
                    counterpart: t.counterpart.clone(),
                },
            });
        }
    }
    out
}

/// Core parent property for a PSD property type.
pub fn core_parent(ptype: &PropertyType) -> Option<&'static str> {
    Some(match ptype {
        PropertyType::SingleValue { .. } => "hasSingleValue",
        PropertyType::EnumeratedValue { .. } => "hasEnumeratedValue",
        PropertyType::ReferenceValue { .. } => "hasReferenceValue",
        PropertyType::ListValue { .. } => "hasListValue",
        PropertyType::BoundedValue { .. } => "hasBoundedValue",
        PropertyType::TableValue { .. } => "hasTableValue",
        PropertyType::Unsupported { .. } => return None,
    })
}

/// Object properties for one property set, in the namespace
/// `{pset_base}{PsetName}#` with prefix `lowerFirst(PsetName)`.
pub fn map_psd(doc: &PsdDocument, ns: &Namespaces) -> Forged {
    let mut out = Forged::new(ns);
    let pset_ns = ns.pset_namespace(&doc.name);
    let prefix = lower_first(&doc.name);
    if out.graph.register_prefix(&prefix, &pset_ns).is_err() {
        out.diagnostics.push(Diagnostic::warning(format!(
            "{}: no usable prefix, full IRIs emitted",
            doc.name
        )));
    }
    let local = |name: &str| Iri::new(format!("{pset_ns}{}", vocab::encode_iri_component(name)));

    let ontology = Iri::new(pset_ns.trim_end_matches('#')).expect("pset namespace");
    out.graph
        .add(ontology.clone(), &rdf::type_(), owl::ontology());
    out.graph
        .add(ontology.clone(), &rdfs::label(), Literal::string(&doc.name));
    if !doc.definition.is_empty() {
        out.graph
            .add(ontology, &rdfs::comment(), Literal::string(&doc.definition));
    }

    let mut used: BTreeSet<String> = BTreeSet::new();
    for prop in &doc.properties {
        let Some(parent) = core_parent(&prop.ptype) else {
            out.diagnostics.push(Diagnostic::warning(format!(
                "{}.{}: property type not mapped, property skipped",
                doc.name, prop.name
            )));
            continue;
        };
        let base = lower_first(&prop.name);
        let mut name = base.clone();
        let mut n = 1;
        while used.contains(&name) {
            n += 1;
            name = format!("{base}_{n}");
        }
        if n > 1 {
            out.diagnostics.push(Diagnostic::warning(format!(
                "{}: duplicate property {} renamed {name}",
                doc.name, prop.name
            )));
        }
        used.insert(name.clone());
        let iri = local(&name).expect("encoded property IRI");

        let g = &mut out.graph;
        g.add(iri.clone(), &rdf::type_(), owl::object_property());
        g.add(iri.clone(), &rdfs::label(), Literal::string(&prop.name));
        if !prop.definition.is_empty() {
            g.add(
                iri.clone(),
                &rdfs::comment(),
                Literal::string(&prop.definition),
            );
        }
        for (aliases, pred) in [
            (&prop.name_aliases, rdfs::label()),
            (&prop.definition_aliases, rdfs::comment()),
        ] {
            for a in aliases {
                if a.text.is_empty() {
                    continue;
                }
                match Literal::lang(&a.text, &a.lang) {
                    Ok(lit) => {
                        g.add(iri.clone(), &pred, lit);
                    }
                    Err(_) => out.diagnostics.push(Diagnostic::warning(format!(
                        "{}.{}: alias language tag {:?} is not well formed, alias skipped",
                        doc.name, prop.name, a.lang
                    ))),
                }
            }
        }
        let parent_iri = ns.ifcwod(parent);
        g.add(iri.clone(), &rdfs::sub_property_of(), parent_iri.clone());
        let range = match &prop.ptype {
            PropertyType::SingleValue { data_type }
            | PropertyType::ListValue { data_type }
            | PropertyType::BoundedValue { data_type } => ns.ifcowl(data_type),
            PropertyType::TableValue { data_types } => {
                ns.ifcowl(data_types.last().expect("non-empty"))
            }
            PropertyType::ReferenceValue { ref_type } => ns.ifcowl(ref_type),
            PropertyType::EnumeratedValue { enum_name, items } => {
                let class = local(enum_name).expect("enum class IRI");
                g.add(class.clone(), &rdf::type_(), owl::class());
                g.add(
                    class.clone(),
                    &rdfs::sub_class_of(),
                    ns.ifcowl("ENUMERATION"),
                );
                g.add(class.clone(), &rdfs::label(), Literal::string(enum_name));
                for item in items {
                    let ind = local(item).expect("enum item IRI");
                    g.add(ind.clone(), &rdf::type_(), owl::named_individual());
                    g.add(ind.clone(), &rdf::type_(), class.clone());
                    g.add(ind, &rdfs::label(), Literal::string(item));
                }
                class
            }
            PropertyType::Unsupported { .. } => unreachable!("filtered above"),
        };
        g.add(iri.clone(), &rdfs::range(), range.clone());
        out.properties.push(DerivedProperty {
            iri,
            label: prop.name.clone(),
            domain: None,
            range,
            parent: Some(parent_iri),
            provenance: Provenance::Pset {
                pset: doc.name.clone(),
                property: prop.name.clone(),
            },
        });
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct CharacteristicsError {
    pub line: usize,
    pub message: String,
}

/// Property characteristics chosen by hand, read from a line-oriented file:
///
/// ```text
/// # comment
/// transitive ifcwod:isPredecessorTo_IfcProcess
/// symmetric  <http://example.org/p>
/// inverse    ifcwod:isPredecessorTo_IfcProcess ifcwod:isSuccessorFrom_IfcProcess
/// ```
///
/// Prefixed names may use any prefix the default namespaces register.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Characteristics {
    pub transitive: BTreeSet<Iri>,
    pub symmetric: BTreeSet<Iri>,
    pub inverse: BTreeSet<(Iri, Iri)>,
}

impl Characteristics {
    pub fn parse(text: &str, ns: &Namespaces) -> Result<Self, CharacteristicsError> {
        let mut prefixes = Graph::new();
        ns.register_standard_prefixes(&mut prefixes);
        let resolve = |tok: &str, line: usize| -> Result<Iri, CharacteristicsError> {
            let err = |message: String| CharacteristicsError { line, message };
            if let Some(inner) = tok.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
                return Iri::new(inner).map_err(|e| err(e.to_string()));
            }
            if let Some((p, local)) = tok.split_once(':') {
                if let Some(base) = prefixes.namespace(p) {
                    return Iri::new(format!("{}{local}", base.as_str()))
                        .map_err(|e| err(e.to_string()));
                }
            }
            Iri::new(tok).map_err(|_| err(format!("cannot resolve {tok}")))
        };
        let mut out = Characteristics::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            // '#' inside <…> IRIs is not a comment
            let content = if raw.contains('<') {
                raw.trim()
            } else {
                content
            };
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            match toks.as_slice() {
                ["transitive", p] => {
                    out.transitive.insert(resolve(p, line)?);
                }
                ["symmetric", p] => {
                    out.symmetric.insert(resolve(p, line)?);
                }
                ["inverse", p, q] => {
                    out.inverse.insert((resolve(p, line)?, resolve(q, line)?));
                }
                _ => {
                    return Err(CharacteristicsError {
                        line,
                        message: format!("expected 'transitive P', 'symmetric P' or 'inverse P Q', found {content:?}"),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Add the owl typings to a TBox graph.
    pub fn apply(&self, graph: &mut Graph) {
        for p in &self.transitive {
            graph.add(p.clone(), &rdf::type_(), owl::transitive_property());
        }
        for p in &self.symmetric {
            graph.add(p.clone(), &rdf::type_(), owl::symmetric_property());
        }
        for (p, q) in &self.inverse {
            graph.add(p.clone(), &owl::inverse_of(), Term::Iri(q.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::express::parse_schema;
    use crate::psd::{Alias, PsdPropertyDef};

    #[test]
    fn core_is_deterministic_and_irreflexive() {
        let ns = Namespaces::default();
        let a = core_tbox(&ns);
        assert_eq!(a, core_tbox(&ns));
        assert!(a.has(
            &ns.ifcwod("hasComplexProperty").into(),
            &rdf::type_(),
            &owl::irreflexive_property().into()
        ));
        assert!(a.has(
            &ns.ifcwod("hasSingleValue").into(),
            &rdfs::sub_property_of(),
            &ns.ifcwod("hasSimpleProperty").into()
        ));
    }

    #[test]
    fn no_relationships_no_properties() {
        let s = parse_schema("ENTITY A; x : REAL; END_ENTITY;").unwrap();
        let f = derive_relationship_properties(&s, &Namespaces::default());
        assert!(f.graph.is_empty());
    }

    #[test]
    fn non_relationship_inverse_skipped() {
        let s = parse_schema(
            "ENTITY R; RelatingA : A; RelatedA : A; END_ENTITY;
             ENTITY A; INVERSE Uses : SET OF R FOR RelatingA; END_ENTITY;",
        )
        .unwrap();
        let f = derive_relationship_properties(&s, &Namespaces::default());
        assert!(f.graph.is_empty());
        assert_eq!(f.diagnostics.len(), 1);
    }

    fn single(name: &str) -> PsdPropertyDef {
        PsdPropertyDef {
            name: name.into(),
            ifcguid: None,
            definition: String::new(),
            name_aliases: vec![Alias {
                lang: "bad tag!".into(),
                text: "x".into(),
            }],
            definition_aliases: vec![],
            ptype: PropertyType::SingleValue {
                data_type: "IfcLabel".into(),
            },
        }
    }

    #[test]
    fn duplicate_property_suffixed() {
        let doc = PsdDocument {
            name: "Pset_Dup".into(),
            properties: vec![single("Reference"), single("Reference")],
            ..PsdDocument::default()
        };
        let f = map_psd(&doc, &Namespaces::default());
        let names: Vec<_> = f
            .properties
            .iter()
            .map(|p| p.iri.as_str().rsplit('#').next().unwrap())
            .collect();
        assert_eq!(names, ["reference", "reference_2"]);
        assert!(f
            .diagnostics
            .iter()
            .any(|d| d.message.contains("reference_2")));
        assert!(f
            .diagnostics
            .iter()
            .any(|d| d.message.contains("language tag")));
    }

    #[test]
    fn characteristics_file() {
        let ns = Namespaces::default();
        let c = Characteristics::parse(
            "# chosen by hand\ntransitive ifcwod:isPredecessorTo_IfcProcess\nsymmetric <http://e/p#q>\n",
            &ns,
        )
        .unwrap();
        assert!(c
            .transitive
            .contains(&ns.ifcwod("isPredecessorTo_IfcProcess")));
        assert!(c.symmetric.contains(&Iri::new("http://e/p#q").unwrap()));
        assert!(Characteristics::parse("reflexive x:y", &ns).is_err());
    }
}
