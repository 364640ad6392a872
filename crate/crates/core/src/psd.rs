//! Property set definition (PSD) XML documents.
//!
//! Only the elements that carry names, definitions, aliases and property
//! types are read. Everything else is skipped.

use std::collections::BTreeMap;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use thiserror::Error;

use crate::diag::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsdError {
    #[error("XML error at byte {position}: {message}")]
    Xml { position: u64, message: String },
    #[error("{0} has no <Name>")]
    MissingName(String),
    #[error("cannot decode document: {0}")]
    Encoding(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyType {
    SingleValue {
        data_type: String,
    },
    EnumeratedValue {
        enum_name: String,
        items: Vec<String>,
    },
    ReferenceValue {
        ref_type: String,
    },
    ListValue {
        data_type: String,
    },
    BoundedValue {
        data_type: String,
    },
    /// Defining value type first, then defined value type.
    TableValue {
        data_types: Vec<String>,
    },
    /// A `<PropertyType>` child this reader does not map, by element name.
    Unsupported {
        element: String,
    },
}

impl PropertyType {
    pub fn is_supported(&self) -> bool {
        !matches!(self, PropertyType::Unsupported { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alias {
    pub lang: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsdPropertyDef {
    pub name: String,
    pub ifcguid: Option<String>,
    pub definition: String,
    pub name_aliases: Vec<Alias>,
    pub definition_aliases: Vec<Alias>,
    pub ptype: PropertyType,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PsdDocument {
    pub name: String,
    pub ifcguid: Option<String>,
    pub template_type: Option<String>,
    pub definition: String,
    pub applicable_classes: Vec<String>,
    pub applicable_type_value: Option<String>,
    pub properties: Vec<PsdPropertyDef>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Decode bytes honouring a UTF-16 or UTF-8 byte order mark; documents
/// without one are read as UTF-8, falling back to Latin-1.
pub fn parse_psd_bytes(bytes: &[u8]) -> Result<PsdDocument, PsdError> {
    let utf16 = |be: bool, body: &[u8]| -> Result<String, PsdError> {
        if !body.len().is_multiple_of(2) {
            return Err(PsdError::Encoding("odd length UTF-16 input".into()));
        }
        let units = body.chunks_exact(2).map(|c| {
            if be {
                u16::from_be_bytes([c[0], c[1]])
            } else {
                u16::from_le_bytes([c[0], c[1]])
            }
        });
        char::decode_utf16(units)
            .collect::<Result<String, _>>()
            .map_err(|e| PsdError::Encoding(e.to_string()))
    };
    let text = match bytes {
        [0xFE, 0xFF, rest @ ..] => utf16(true, rest)?,
        [0xFF, 0xFE, rest @ ..] => utf16(false, rest)?,
        [0x00, b'<', ..] => utf16(true, bytes)?,
        [b'<', 0x00, ..] => utf16(false, bytes)?,
        _ => crate::diag::decode_text(bytes),
    };
    parse_psd(&text)
}

#[derive(Default)]
struct PropBuilder {
    name: Option<String>,
    ifcguid: Option<String>,
    definition: String,
    name_aliases: Vec<Alias>,
    definition_aliases: Vec<Alias>,
    kind: Option<String>,
    data_types: Vec<String>,
    enum_name: Option<String>,
    enum_items: Vec<String>,
    ref_type: Option<String>,
}

const KNOWN_TYPES: [&str; 6] = [
    "TypePropertySingleValue",
    "TypePropertyEnumeratedValue",
    "TypePropertyReferenceValue",
    "TypePropertyListValue",
    "TypePropertyBoundedValue",
    "TypePropertyTableValue",
];

pub fn parse_psd(xml: &str) -> Result<PsdDocument, PsdError> {
    let mut reader = Reader::from_str(xml);
    let mut doc = PsdDocument::default();
    let mut doc_name: Option<String> = None;
    let mut stack: Vec<String> = Vec::new();
    let mut text = String::new();
    let mut prop: Option<PropBuilder> = None;
    let mut alias_lang = String::new();
    let xml_err = |reader: &Reader<&[u8]>, e: quick_xml::Error| PsdError::Xml {
        position: reader.error_position(),
        message: e.to_string(),
    };

    loop {
        let event = reader.read_event().map_err(|e| xml_err(&reader, e))?;
        match event {
            Event::Start(e) => {
                let name = e.local_name().as_ref().to_string();
                open(&name, &e, &stack, &mut doc, &mut prop, &mut alias_lang)?;
                stack.push(name);
                text.clear();
            }
            Event::Empty(e) => {
                let name = e.local_name().as_ref().to_string();
                open(&name, &e, &stack, &mut doc, &mut prop, &mut alias_lang)?;
                text.clear();
                close(
                    &name,
                    &stack,
                    "",
                    &mut doc,
                    &mut doc_name,
                    &mut prop,
                    &alias_lang,
                )?;
            }
            Event::Text(t) => text.push_str(&t.xml10_content()),
            Event::CData(t) => text.push_str(&t.xml10_content()),
            Event::GeneralRef(r) => {
                let resolved = match r.resolve_char_ref() {
                    Ok(Some(c)) => c.to_string(),
                    Ok(None) => match r.xml10_content().as_ref() {
                        "amp" => "&".into(),
                        "lt" => "<".into(),
                        "gt" => ">".into(),
                        "quot" => "\"".into(),
                        "apos" => "'".into(),
                        other => {
                            doc.diagnostics.push(Diagnostic::warning(format!(
                                "unknown entity &{other}; kept literally"
                            )));
                            format!("&{other};")
                        }
                    },
                    Err(e) => return Err(xml_err(&reader, e)),
                };
                text.push_str(&resolved);
            }
            Event::End(_) => {
                let name = stack.pop().unwrap_or_default();
                let content = normalize_space(&text);
                close(
                    &name,
                    &stack,
                    &content,
                    &mut doc,
                    &mut doc_name,
                    &mut prop,
                    &alias_lang,
                )?;
                text.clear();
            }
            Event::Eof => break,
            _ => {}
        }
    }

    doc.name = doc_name.ok_or_else(|| PsdError::MissingName("property set".into()))?;
    if !doc.name.starts_with("Pset_") {
        doc.diagnostics.push(Diagnostic::warning(format!(
            "property set name {} does not follow the Pset_ convention",
            doc.name
        )));
    }
    Ok(doc)
}

fn attrs(e: &BytesStart<'_>) -> BTreeMap<String, String> {
    e.attributes()
        .flatten()
        .filter_map(|a| {
            let key = a.key.local_name().as_ref().to_string();
            a.normalized_value(quick_xml::XmlVersion::Implicit1_0)
                .ok()
                .map(|v| (key, v.into_owned()))
        })
        .collect()
}

fn normalize_space(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn open(
    name: &str,
    e: &BytesStart<'_>,
    stack: &[String],
    doc: &mut PsdDocument,
    prop: &mut Option<PropBuilder>,
    alias_lang: &mut String,
) -> Result<(), PsdError> {
    let parent = stack.last().map(String::as_str);
    let a = attrs(e);
    match name {
        "PropertySetDef" if stack.is_empty() => {
            doc.ifcguid = a.get("ifcguid").cloned();
            doc.template_type = a
                .get("templatetype")
                .or_else(|| a.get("templatype"))
                .cloned();
        }
        "PropertyDef" if parent == Some("PropertyDefs") && prop.is_none() => {
            *prop = Some(PropBuilder {
                ifcguid: a.get("ifcguid").cloned(),
                ..PropBuilder::default()
            });
        }
        _ => {}
    }
    let Some(p) = prop.as_mut() else {
        return Ok(());
    };
    if parent == Some("PropertyType") {
        if p.kind.is_none() {
            p.kind = Some(name.to_string());
        }
        if name == "TypePropertyReferenceValue" {
            p.ref_type = a.get("reftype").cloned();
        }
    }
    let in_ptype = stack.iter().any(|s| s == "PropertyType");
    match name {
        "DataType" if in_ptype => {
            if let Some(t) = a.get("type") {
                p.data_types.push(t.clone());
            }
        }
        "EnumList" if in_ptype => p.enum_name = a.get("name").cloned(),
        "NameAlias" | "DefinitionAlias" => *alias_lang = a.get("lang").cloned().unwrap_or_default(),
        _ => {}
    }
    Ok(())
}

fn close(
    name: &str,
    stack: &[String],
    content: &str,
    doc: &mut PsdDocument,
    doc_name: &mut Option<String>,
    prop: &mut Option<PropBuilder>,
    alias_lang: &str,
) -> Result<(), PsdError> {
    let parent = stack.last().map(String::as_str);
    match (name, parent) {
        ("Name", Some("PropertySetDef")) if !content.is_empty() => {
            *doc_name = Some(content.to_string())
        }
        ("Definition", Some("PropertySetDef")) => doc.definition = content.to_string(),
        ("ClassName", Some("ApplicableClasses")) if !content.is_empty() => {
            doc.applicable_classes.push(content.to_string())
        }
        ("ApplicableTypeValue", _) if !content.is_empty() => {
            doc.applicable_type_value = Some(content.to_string())
        }
        _ => {}
    }
    let Some(p) = prop.as_mut() else {
        return Ok(());
    };
    match (name, parent) {
        ("Name", Some("PropertyDef")) if !content.is_empty() => p.name = Some(content.to_string()),
        ("Definition", Some("PropertyDef")) => p.definition = content.to_string(),
        ("EnumItem", _) if !content.is_empty() => p.enum_items.push(content.to_string()),
        ("NameAlias", _) => p.name_aliases.push(Alias {
            lang: alias_lang.to_string(),
            text: content.to_string(),
        }),
        ("DefinitionAlias", _) => p.definition_aliases.push(Alias {
            lang: alias_lang.to_string(),
            text: content.to_string(),
        }),
        ("PropertyDef", Some("PropertyDefs")) => {
            let b = prop.take().expect("builder");
            let def = finish(b, doc, doc_name.as_deref())?;
            doc.properties.push(def);
        }
        _ => {}
    }
    Ok(())
}

fn finish(
    b: PropBuilder,
    doc: &mut PsdDocument,
    set_name: Option<&str>,
) -> Result<PsdPropertyDef, PsdError> {
    let name = b.name.ok_or_else(|| {
        PsdError::MissingName(format!(
            "PropertyDef #{} of {}",
            doc.properties.len() + 1,
            set_name.unwrap_or("property set")
        ))
    })?;
    let first_type = b.data_types.first().cloned();
    let mut report = |msg: String| {
        doc.diagnostics
            .push(Diagnostic::warning(format!("{name}: {msg}")))
    };
    let ptype = match b.kind.as_deref() {
        None => {
            report("no <PropertyType>".into());
            PropertyType::Unsupported {
                element: "PropertyType".into(),
            }
        }
        Some(kind) if !KNOWN_TYPES.contains(&kind) => {
            report(format!("unsupported property type <{kind}>"));
            PropertyType::Unsupported {
                element: kind.into(),
            }
        }
        Some("TypePropertyEnumeratedValue") => match b.enum_name {
            Some(enum_name) if !b.enum_items.is_empty() => PropertyType::EnumeratedValue {
                enum_name,
                items: b.enum_items,
            },
            _ => {
                report("enumeration without a name or items".into());
                PropertyType::Unsupported {
                    element: "TypePropertyEnumeratedValue".into(),
                }
            }
        },
        Some("TypePropertyReferenceValue") => match b.ref_type.or(first_type) {
            Some(ref_type) => PropertyType::ReferenceValue { ref_type },
            None => {
                report("reference value without reftype".into());
                PropertyType::Unsupported {
                    element: "TypePropertyReferenceValue".into(),
                }
            }
        },
        Some("TypePropertyTableValue") if !b.data_types.is_empty() => PropertyType::TableValue {
            data_types: b.data_types,
        },
        Some(kind) => match first_type {
            Some(data_type) => match kind {
                "TypePropertySingleValue" => PropertyType::SingleValue { data_type },
                "TypePropertyListValue" => PropertyType::ListValue { data_type },
                "TypePropertyBoundedValue" => PropertyType::BoundedValue { data_type },
                _ => PropertyType::Unsupported {
                    element: kind.into(),
                },
            },
            None => {
                report(format!("<{kind}> without <DataType>"));
                PropertyType::Unsupported {
                    element: kind.into(),
                }
            }
        },
    };
    Ok(PsdPropertyDef {
        name,
        ifcguid: b.ifcguid,
        definition: b.definition,
        name_aliases: b.name_aliases,
        definition_aliases: b.definition_aliases,
        ptype,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF_ONLY: &str = r#"<?xml version="1.0"?>
<PropertySetDef ifcguid="x">
  <Name>Pset_Test</Name>
  <Definition>Test set.</Definition>
  <ApplicableClasses><ClassName>IfcWall</ClassName></ApplicableClasses>
  <PropertyDefs>
    <PropertyDef>
      <Name>Clock</Name>
      <Definition>A &amp; B &#x53C2;</Definition>
      <PropertyType><TypePropertyReferenceValue reftype="IfcTimeSeries"/></PropertyType>
    </PropertyDef>
    <PropertyDef>
      <Name>Shape</Name>
      <PropertyType><TypeComplexProperty name="X"/></PropertyType>
    </PropertyDef>
    <PropertyDef>
      <Name>Table</Name>
      <PropertyType><TypePropertyTableValue>
        <DefiningValue><DataType type="IfcReal"/></DefiningValue>
        <DefinedValue><DataType type="IfcLengthMeasure"/></DefinedValue>
      </TypePropertyTableValue></PropertyType>
    </PropertyDef>
  </PropertyDefs>
</PropertySetDef>"#;

    #[test]
    fn reference_unsupported_and_table() {
        let d = parse_psd(REF_ONLY).unwrap();
        assert_eq!(d.name, "Pset_Test");
        assert_eq!(d.applicable_classes, vec!["IfcWall"]);
        assert_eq!(d.properties.len(), 3);
        assert_eq!(
            d.properties[0].ptype,
            PropertyType::ReferenceValue {
                ref_type: "IfcTimeSeries".into()
            }
        );
        assert_eq!(d.properties[0].definition, "A & B 参");
        assert!(!d.properties[1].ptype.is_supported());
        assert_eq!(d.diagnostics.len(), 1);
        assert_eq!(
            d.properties[2].ptype,
            PropertyType::TableValue {
                data_types: vec!["IfcReal".into(), "IfcLengthMeasure".into()]
            }
        );
    }

    #[test]
    fn missing_names_are_fatal() {
        assert_eq!(
            parse_psd("<PropertySetDef><PropertyDefs/></PropertySetDef>"),
            Err(PsdError::MissingName("property set".into()))
        );
        let e = parse_psd(
            "<PropertySetDef><Name>Pset_A</Name><PropertyDefs><PropertyDef><Definition>x</Definition></PropertyDef></PropertyDefs></PropertySetDef>",
        )
        .unwrap_err();
        assert!(matches!(e, PsdError::MissingName(m) if m.contains("Pset_A")));
    }

    #[test]
    fn empty_set_and_nonstandard_name() {
        let d = parse_psd("<PropertySetDef><Name>PSet_Vendor</Name><PropertyDefs></PropertyDefs></PropertySetDef>").unwrap();
        assert!(d.properties.is_empty());
        assert!(d.diagnostics[0].message.contains("Pset_"));
    }

    #[test]
    fn utf16_input() {
        let xml = "<PropertySetDef><Name>Pset_Ü</Name></PropertySetDef>";
        let mut bytes = vec![0xFF, 0xFE];
        for u in xml.encode_utf16() {
            bytes.extend_from_slice(&u.to_le_bytes());
        }
        assert_eq!(parse_psd_bytes(&bytes).unwrap().name, "Pset_Ü");
    }

    #[test]
    fn malformed_xml_reported() {
        assert!(matches!(
            parse_psd("<PropertySetDef><Name>Pset_A</Nme></PropertySetDef>"),
            Err(PsdError::Xml { .. })
        ));
    }
}
