//! Namespaces and well-known terms.

use crate::rdf::{Graph, Iri};

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub const IFCWOD: &str = "http://buildingsmart.org/ontology/ifcwod#";
pub const IFCOWL: &str = "https://w3id.org/ifc/IFC4_ADD1#";
pub const PSET_BASE: &str = "http://buildingsmart.org/ontology/ifcwod/";

fn iri(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("vocabulary IRI")
}

pub mod rdf {
    use super::*;

    pub fn type_() -> Iri {
        iri(RDF, "type")
    }
}

pub mod rdfs {
    use super::*;

    pub fn label() -> Iri {
        iri(RDFS, "label")
    }
    pub fn comment() -> Iri {
        iri(RDFS, "comment")
    }
    pub fn domain() -> Iri {
        iri(RDFS, "domain")
    }
    pub fn range() -> Iri {
        iri(RDFS, "range")
    }
    pub fn sub_property_of() -> Iri {
        iri(RDFS, "subPropertyOf")
    }
    pub fn sub_class_of() -> Iri {
        iri(RDFS, "subClassOf")
    }
}

pub mod owl {
    use super::*;

    pub fn object_property() -> Iri {
        iri(OWL, "ObjectProperty")
    }
    pub fn datatype_property() -> Iri {
        iri(OWL, "DatatypeProperty")
    }
    pub fn irreflexive_property() -> Iri {
        iri(OWL, "IrreflexiveProperty")
    }
    pub fn transitive_property() -> Iri {
        iri(OWL, "TransitiveProperty")
    }
    pub fn symmetric_property() -> Iri {
        iri(OWL, "SymmetricProperty")
    }
    pub fn inverse_of() -> Iri {
        iri(OWL, "inverseOf")
    }
    pub fn top_object_property() -> Iri {
        iri(OWL, "topObjectProperty")
    }
    pub fn class() -> Iri {
        iri(OWL, "Class")
    }
    pub fn named_individual() -> Iri {
        iri(OWL, "NamedIndividual")
    }
    pub fn ontology() -> Iri {
        iri(OWL, "Ontology")
    }
}

pub mod xsd {
    use super::*;

    pub fn string() -> Iri {
        iri(XSD, "string")
    }
    pub fn boolean() -> Iri {
        iri(XSD, "boolean")
    }
    pub fn integer() -> Iri {
        iri(XSD, "integer")
    }
    pub fn decimal() -> Iri {
        iri(XSD, "decimal")
    }
    pub fn double() -> Iri {
        iri(XSD, "double")
    }

    pub fn is_numeric(dt: &Iri) -> bool {
        dt.as_str().strip_prefix(XSD).is_some_and(|local| {
            matches!(
                local,
                "integer"
                    | "decimal"
                    | "double"
                    | "float"
                    | "int"
                    | "long"
                    | "short"
                    | "nonNegativeInteger"
            )
        })
    }
}

/// The configurable namespaces used when forging and converting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Namespaces {
    pub ifcowl: String,
    pub ifcwod: String,
    /// Property-set namespaces are `{pset_base}{PsetName}#`.
    pub pset_base: String,
}

impl Default for Namespaces {
    fn default() -> Self {
        Namespaces {
            ifcowl: IFCOWL.to_string(),
            ifcwod: IFCWOD.to_string(),
            pset_base: PSET_BASE.to_string(),
        }
    }
}

impl Namespaces {
    pub fn ifcowl(&self, local: &str) -> Iri {
        iri(&self.ifcowl, local)
    }

    pub fn ifcwod(&self, local: &str) -> Iri {
        iri(&self.ifcwod, local)
    }

    pub fn pset_namespace(&self, pset_name: &str) -> String {
        format!("{}{}#", self.pset_base, encode_iri_component(pset_name))
    }

    /// Prefixes every emitted graph carries.
    pub fn register_standard_prefixes(&self, graph: &mut Graph) {
        let pairs = [
            ("rdf", RDF),
            ("rdfs", RDFS),
            ("owl", OWL),
            ("xsd", XSD),
            ("ifcowl", self.ifcowl.as_str()),
            ("ifcwod", self.ifcwod.as_str()),
        ];
        for (p, ns) in pairs {
            graph.register_prefix(p, ns).expect("standard prefix");
        }
    }
}

/// `IsExternal` → `isExternal`. Only the first character changes.
pub fn lower_first(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Percent-encode everything outside the IRI-unreserved ASCII set.
pub fn encode_iri_component(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.' | b'~') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_first_only_touches_first_char() {
        assert_eq!(lower_first("IsExternal"), "isExternal");
        assert_eq!(lower_first("IsPredecessorTo"), "isPredecessorTo");
        assert_eq!(
            lower_first("Pset_StackTerminalTypeCommon"),
            "pset_StackTerminalTypeCommon"
        );
        assert_eq!(lower_first(""), "");
    }

    #[test]
    fn encodes_spaces_and_non_ascii() {
        assert_eq!(
            encode_iri_component("PSet_Revit_Type_Construction"),
            "PSet_Revit_Type_Construction"
        );
        assert_eq!(encode_iri_component("a b"), "a%20b");
        assert_eq!(encode_iri_component("é"), "%C3%A9");
    }
}
