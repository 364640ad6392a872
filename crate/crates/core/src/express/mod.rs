//! A parser for the EXPRESS subset that IFC entity declarations use.
//!
//! Only `ENTITY` and `TYPE` blocks are interpreted. `WHERE`, `DERIVE` and
//! `UNIQUE` clauses, functions, rules and constants are skipped; clauses
//! skipped inside an entity are kept as [`SkippedSpan`]s.
//!
//! Names are looked up case-insensitively but keep the casing they were
//! declared with.

mod lexer;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::diag::Diagnostic;
use lexer::{tokenize, Tok, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpressError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unbalanced ENTITY/END_ENTITY ({message})")]
    Unbalanced {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown entity {0}")]
    UnknownEntity(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AggregateKind {
    Set,
    List,
    Bag,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub low: u64,
    /// `None` is the unbounded `?`.
    pub high: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Aggregation {
    pub kind: AggregateKind,
    pub bounds: Option<Bounds>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeDef {
    pub name: String,
    /// Element type, with aggregations unwrapped.
    pub type_name: String,
    pub is_optional: bool,
    /// Outermost aggregation first; empty for scalar attributes.
    pub aggregation: Vec<Aggregation>,
}

impl AttributeDef {
    pub fn is_aggregate(&self) -> bool {
        !self.aggregation.is_empty()
    }

    pub fn is_ordered(&self) -> bool {
        matches!(
            self.aggregation.first().map(|a| a.kind),
            Some(AggregateKind::List | AggregateKind::Array)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseAttributeDef {
    pub name: String,
    pub relationship_entity: String,
    pub for_attribute: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedSpan {
    pub entity: Option<String>,
    pub construct: String,
    pub start_line: usize,
    pub end_line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntityDef {
    pub name: String,
    pub is_abstract: bool,
    pub supertypes: Vec<String>,
    pub attributes: Vec<AttributeDef>,
    pub inverses: Vec<InverseAttributeDef>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectDef {
    pub name: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationDef {
    pub name: String,
    pub items: Vec<String>,
}

/// A `TYPE X = REAL;`-style declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinedType {
    pub name: String,
    pub underlying: String,
    pub aggregation: Vec<Aggregation>,
}

/// What a type name ultimately denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseType {
    Integer,
    Real,
    Number,
    Boolean,
    Logical,
    String,
    Binary,
    Enumeration(String),
    Select(String),
    Entity(String),
    Unknown(String),
}

#[derive(Clone, Debug, Default)]
pub struct ExpressSchema {
    pub name: Option<String>,
    entities: BTreeMap<String, EntityDef>,
    selects: BTreeMap<String, SelectDef>,
    enumerations: BTreeMap<String, EnumerationDef>,
    defined_types: BTreeMap<String, DefinedType>,
    unresolved: BTreeSet<String>,
    pub diagnostics: Vec<Diagnostic>,
    pub skipped: Vec<SkippedSpan>,
}

fn key(name: &str) -> String {
    name.to_ascii_uppercase()
}

fn starts_with_ci(s: &str, prefix: &str) -> bool {
    s.len() >= prefix.len() && s[..prefix.len()].eq_ignore_ascii_case(prefix)
}

impl ExpressSchema {
    pub fn entity(&self, name: &str) -> Option<&EntityDef> {
        self.entities.get(&key(name))
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityDef> {
        self.entities.values()
    }

    pub fn select(&self, name: &str) -> Option<&SelectDef> {
        self.selects.get(&key(name))
    }

    pub fn enumeration(&self, name: &str) -> Option<&EnumerationDef> {
        self.enumerations.get(&key(name))
    }

    pub fn defined_type(&self, name: &str) -> Option<&DefinedType> {
        self.defined_types.get(&key(name))
    }

    /// Supertype names referenced by some entity but not declared here.
    pub fn unresolved_supertypes(&self) -> &BTreeSet<String> {
        &self.unresolved
    }

    /// Declared casing for any type or entity name known to the schema.
    pub fn canonical_name<'a>(&'a self, name: &'a str) -> &'a str {
        let k = key(name);
        if let Some(e) = self.entities.get(&k) {
            &e.name
        } else if let Some(s) = self.selects.get(&k) {
            &s.name
        } else if let Some(e) = self.enumerations.get(&k) {
            &e.name
        } else if let Some(d) = self.defined_types.get(&k) {
            &d.name
        } else {
            name
        }
    }

    /// The entity followed by all its ancestors, breadth first, each once.
    pub fn ancestry(&self, name: &str) -> Vec<&EntityDef> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([key(name)]);
        while let Some(k) = queue.pop_front() {
            if !seen.insert(k.clone()) {
                continue;
            }
            if let Some(e) = self.entities.get(&k) {
                out.push(e);
                queue.extend(e.supertypes.iter().map(|s| key(s)));
            }
        }
        out
    }

    pub fn is_subtype_of(&self, name: &str, ancestor: &str) -> bool {
        let target = key(ancestor);
        self.ancestry(name).iter().any(|e| key(&e.name) == target)
    }

    /// Forward attributes in STEP parameter order: root supertype first.
    pub fn all_attributes(&self, name: &str) -> Vec<(&EntityDef, &AttributeDef)> {
        let mut out = Vec::new();
        let mut visiting = BTreeSet::new();
        self.collect_attributes(name, &mut out, &mut visiting);
        out
    }

    fn collect_attributes<'a>(
        &'a self,
        name: &str,
        out: &mut Vec<(&'a EntityDef, &'a AttributeDef)>,
        visiting: &mut BTreeSet<String>,
    ) {
        let k = key(name);
        if !visiting.insert(k.clone()) {
            return;
        }
        let Some(e) = self.entities.get(&k) else {
            return;
        };
        for sup in &e.supertypes {
            self.collect_attributes(sup, out, visiting);
        }
        out.extend(e.attributes.iter().map(|a| (e, a)));
    }

    /// Look an attribute up on the entity itself, then on its supertypes.
    pub fn find_attribute(&self, entity: &str, attr: &str) -> Option<(&EntityDef, &AttributeDef)> {
        self.ancestry(entity).into_iter().find_map(|e| {
            e.attributes
                .iter()
                .find(|a| a.name.eq_ignore_ascii_case(attr))
                .map(|a| (e, a))
        })
    }

    /// First attribute whose name starts with `prefix`, own attributes first.
    fn find_attribute_with_prefix(
        &self,
        entity: &str,
        prefix: &str,
    ) -> Option<(&EntityDef, &AttributeDef)> {
        self.ancestry(entity).into_iter().find_map(|e| {
            e.attributes
                .iter()
                .find(|a| starts_with_ci(&a.name, prefix))
                .map(|a| (e, a))
        })
    }

    /// Follow defined types down to a base type.
    pub fn resolve_base_type(&self, name: &str) -> BaseType {
        let mut current = name.to_string();
        for _ in 0..32 {
            let k = key(&current);
            match k.as_str() {
                "INTEGER" => return BaseType::Integer,
                "REAL" => return BaseType::Real,
                "NUMBER" => return BaseType::Number,
                "BOOLEAN" => return BaseType::Boolean,
                "LOGICAL" => return BaseType::Logical,
                "STRING" => return BaseType::String,
                "BINARY" => return BaseType::Binary,
                _ => {}
            }
            if let Some(e) = self.enumerations.get(&k) {
                return BaseType::Enumeration(e.name.clone());
            }
            if let Some(s) = self.selects.get(&k) {
                return BaseType::Select(s.name.clone());
            }
            if let Some(e) = self.entities.get(&k) {
                return BaseType::Entity(e.name.clone());
            }
            match self.defined_types.get(&k) {
                Some(d) => current = d.underlying.clone(),
                None => return BaseType::Unknown(current),
            }
        }
        BaseType::Unknown(current)
    }

    /// Whether `type_name` is admissible where `expected` is declared:
    /// equal, a (transitive) select member, or an entity subtype.
    pub fn type_conforms(&self, type_name: &str, expected: &str) -> bool {
        if type_name.eq_ignore_ascii_case(expected) {
            return true;
        }
        if let Some(sel) = self.select(expected) {
            let mut stack: Vec<&str> = sel.members.iter().map(String::as_str).collect();
            let mut seen = BTreeSet::new();
            while let Some(m) = stack.pop() {
                if !seen.insert(key(m)) {
                    continue;
                }
                if m.eq_ignore_ascii_case(type_name) || self.is_subtype_of(type_name, m) {
                    return true;
                }
                if let Some(inner) = self.select(m) {
                    stack.extend(inner.members.iter().map(String::as_str));
                }
            }
            return false;
        }
        self.is_subtype_of(type_name, expected)
    }
}

/// One `(p, r)` element of an entity's inverse-derived property set, with the
/// relationship attributes it was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseTuple {
    /// Inverse attribute name with its first letter lowercased.
    pub property: String,
    /// Declared type of the relationship's `Relating…` attribute, aggregation unwrapped.
    pub range: String,
    pub inverse_name: String,
    pub declared_on: String,
    pub relationship: String,
    /// The attribute on the relationship the inverse is declared `FOR`.
    pub for_attribute: String,
    /// The other side of the `Relating…`/`Related…` pair.
    pub counterpart: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InverseTuples {
    pub tuples: BTreeMap<String, InverseTuple>,
    pub skipped: Vec<Diagnostic>,
}

impl InverseTuples {
    pub fn pairs(&self) -> BTreeSet<(String, String)> {
        self.tuples
            .values()
            .map(|t| (t.property.clone(), t.range.clone()))
            .collect()
    }
}

/// Inverse tuples of `entity`, including the ones inherited from supertypes.
pub fn collect_inverse_tuples(
    schema: &ExpressSchema,
    entity: &str,
) -> Result<InverseTuples, ExpressError> {
    if schema.entity(entity).is_none() {
        return Err(ExpressError::UnknownEntity(entity.to_string()));
    }
    let mut out = InverseTuples::default();
    for e in schema.ancestry(entity) {
        for inv in &e.inverses {
            let property = crate::vocab::lower_first(&inv.name);
            if out.tuples.contains_key(&property) {
                continue;
            }
            match inverse_tuple(schema, e, inv) {
                Ok(t) => {
                    out.tuples.insert(property, t);
                }
                Err(msg) => out.skipped.push(Diagnostic::warning(format!(
                    "{}.{}: {msg}",
                    e.name, inv.name
                ))),
            }
        }
    }
    Ok(out)
}

fn inverse_tuple(
    schema: &ExpressSchema,
    owner: &EntityDef,
    inv: &InverseAttributeDef,
) -> Result<InverseTuple, String> {
    let rel = schema.entity(&inv.relationship_entity).ok_or_else(|| {
        format!(
            "relationship entity {} is not declared",
            inv.relationship_entity
        )
    })?;
    let (_, for_attr) = schema
        .find_attribute(&rel.name, &inv.for_attribute)
        .ok_or_else(|| format!("{} has no attribute {}", rel.name, inv.for_attribute))?;
    let (relating, counterpart) = if starts_with_ci(&for_attr.name, "Relating") {
        let related = schema
            .find_attribute_with_prefix(&rel.name, "Related")
            .ok_or_else(|| {
                format!(
                    "{} has no Related… attribute to pair with {}",
                    rel.name, for_attr.name
                )
            })?;
        (for_attr, related.1)
    } else if starts_with_ci(&for_attr.name, "Related") {
        let relating = schema
            .find_attribute_with_prefix(&rel.name, "Relating")
            .ok_or_else(|| {
                format!(
                    "{} has no Relating… attribute to pair with {}",
                    rel.name, for_attr.name
                )
            })?;
        (relating.1, relating.1)
    } else {
        return Err(format!(
            "FOR attribute {} is neither a Relating… nor a Related… attribute",
            for_attr.name
        ));
    };
    Ok(InverseTuple {
        property: crate::vocab::lower_first(&inv.name),
        range: schema.canonical_name(&relating.type_name).to_string(),
        inverse_name: inv.name.clone(),
        declared_on: owner.name.clone(),
        relationship: rel.name.clone(),
        for_attribute: for_attr.name.clone(),
        counterpart: counterpart.name.clone(),
    })
}

/// Parse EXPRESS source from raw bytes (UTF-8, else Latin-1).
pub fn parse_schema_bytes(bytes: &[u8]) -> Result<ExpressSchema, ExpressError> {
    parse_schema(&crate::diag::decode_text(bytes))
}

pub fn parse_schema(text: &str) -> Result<ExpressSchema, ExpressError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        schema: ExpressSchema::default(),
    };
    p.schema_body()?;
    let mut schema = p.schema;
    validate(&mut schema);
    Ok(schema)
}

const CLAUSE_KEYWORDS: [&str; 5] = ["INVERSE", "DERIVE", "UNIQUE", "WHERE", "END_ENTITY"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    schema: ExpressSchema,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn last_location(&self) -> (usize, usize) {
        self.toks
            .get(self.pos.min(self.toks.len()).saturating_sub(1))
            .map_or((1, 1), |t| (t.line, t.column))
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExpressError> {
        let (line, column) = self
            .peek()
            .map_or_else(|| self.last_location(), |t| (t.line, t.column));
        Err(ExpressError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn ident(&mut self) -> Result<String, ExpressError> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(other) => self.syntax(format!("expected identifier, found {other:?}")),
            None => self.syntax("expected identifier, found end of input"),
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ExpressError> {
        match self.peek() {
            Some(t) if t.is_punct(c) => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let found = format!("{:?}", t.tok);
                self.syntax(format!("expected '{c}', found {found}"))
            }
            None => self.syntax(format!("expected '{c}', found end of input")),
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_kw(kw))
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_to_semicolon(&mut self) {
        let mut depth = 0i32;
        while let Some(t) = self.next() {
            match t.tok {
                Tok::Punct('(') => depth += 1,
                Tok::Punct(')') => depth -= 1,
                Tok::Punct(';') if depth <= 0 => return,
                _ => {}
            }
        }
    }

    fn skip_balanced_parens(&mut self) -> Result<(), ExpressError> {
        self.expect_punct('(')?;
        let mut depth = 1;
        while depth > 0 {
            match self.next() {
                Some(t) if t.is_punct('(') => depth += 1,
                Some(t) if t.is_punct(')') => depth -= 1,
                Some(_) => {}
                None => return self.syntax("unbalanced parentheses"),
            }
        }
        Ok(())
    }

    fn schema_body(&mut self) -> Result<(), ExpressError> {
        while let Some(t) = self.peek().cloned() {
            if t.is_kw("SCHEMA") {
                self.pos += 1;
                self.schema.name = Some(self.ident()?);
                self.skip_to_semicolon();
            } else if t.is_kw("ENTITY") {
                self.entity()?;
            } else if t.is_kw("TYPE") {
                self.type_decl()?;
            } else if t.is_kw("END_ENTITY") {
                return Err(ExpressError::Unbalanced {
                    line: t.line,
                    column: t.column,
                    message: "END_ENTITY without a matching ENTITY".into(),
                });
            } else if let Some(end) = [
                "FUNCTION",
                "RULE",
                "PROCEDURE",
                "CONSTANT",
                "SUBTYPE_CONSTRAINT",
            ]
            .iter()
            .find(|kw| t.is_kw(kw))
            {
                self.skip_block(end)?;
            } else {
                self.pos += 1;
            }
        }
        Ok(())
    }

    /// Skip `KW ... END_KW;`, honouring nested blocks of the same kind.
    fn skip_block(&mut self, kw: &str) -> Result<(), ExpressError> {
        let start = self.next().expect("block keyword");
        let end_kw = format!("END_{kw}");
        let mut depth = 1;
        while let Some(t) = self.next() {
            if t.is_kw(kw) {
                depth += 1;
            } else if t.is_kw(&end_kw) {
                depth -= 1;
                if depth == 0 {
                    if self.peek().is_some_and(|t| t.is_punct(';')) {
                        self.pos += 1;
                    }
                    return Ok(());
                }
            }
        }
        Err(ExpressError::Syntax {
            line: start.line,
            column: start.column,
            message: format!("{kw} without {end_kw}"),
        })
    }

    fn type_decl(&mut self) -> Result<(), ExpressError> {
        let start = self.next().expect("TYPE");
        let name = self.ident()?;
        self.expect_punct('=')?;
        self.eat_kw("EXTENSIBLE");
        self.eat_kw("GENERIC_ENTITY");
        if self.eat_kw("SELECT") {
            let members = if self.peek().is_some_and(|t| t.is_punct('(')) {
                self.ident_list()?
            } else {
                Vec::new()
            };
            self.schema
                .selects
                .insert(key(&name), SelectDef { name, members });
        } else if self.eat_kw("ENUMERATION") {
            let items = if self.eat_kw("OF") {
                self.ident_list()?
            } else {
                Vec::new()
            };
            self.schema
                .enumerations
                .insert(key(&name), EnumerationDef { name, items });
        } else {
            let (aggregation, underlying) = self.type_spec()?;
            self.schema.defined_types.insert(
                key(&name),
                DefinedType {
                    name,
                    underlying,
                    aggregation,
                },
            );
        }
        // rest of the block (WHERE rules, BASED_ON, …) is not interpreted
        while let Some(t) = self.next() {
            if t.is_kw("END_TYPE") {
                if self.peek().is_some_and(|t| t.is_punct(';')) {
                    self.pos += 1;
                }
                return Ok(());
            }
            if t.is_kw("ENTITY") || t.is_kw("TYPE") {
                break;
            }
        }
        Err(ExpressError::Syntax {
            line: start.line,
            column: start.column,
            message: "TYPE without END_TYPE".into(),
        })
    }

    fn ident_list(&mut self) -> Result<Vec<String>, ExpressError> {
        self.expect_punct('(')?;
        let mut out = Vec::new();
        loop {
            out.push(self.ident()?);
            match self.next() {
                Some(t) if t.is_punct(',') => continue,
                Some(t) if t.is_punct(')') => return Ok(out),
                _ => return self.syntax("expected ',' or ')' in identifier list"),
            }
        }
    }

    /// `SET [1:?] OF LIST [1:3] OF IfcLengthMeasure` → aggregations + element type.
    fn type_spec(&mut self) -> Result<(Vec<Aggregation>, String), ExpressError> {
        let mut aggs = Vec::new();
        loop {
            let kind = if self.eat_kw("SET") {
                AggregateKind::Set
            } else if self.eat_kw("LIST") {
                AggregateKind::List
            } else if self.eat_kw("BAG") {
                AggregateKind::Bag
            } else if self.eat_kw("ARRAY") {
                AggregateKind::Array
            } else {
                break;
            };
            let bounds = if self.peek().is_some_and(|t| t.is_punct('[')) {
                self.bounds()?
            } else {
                None
            };
            if !self.eat_kw("OF") {
                return self.syntax("expected OF after aggregation");
            }
            self.eat_kw("OPTIONAL");
            self.eat_kw("UNIQUE");
            aggs.push(Aggregation { kind, bounds });
        }
        let base = self.ident()?;
        if self.peek().is_some_and(|t| t.is_punct('(')) {
            // STRING(22), BINARY(32)
            self.skip_balanced_parens()?;
        }
        self.eat_kw("FIXED");
        Ok((aggs, base))
    }

    fn bounds(&mut self) -> Result<Option<Bounds>, ExpressError> {
        let open = self.next().expect("[");
        let mut parts: Vec<Vec<Tok>> = vec![Vec::new()];
        loop {
            match self.next() {
                Some(t) if t.is_punct(']') => break,
                Some(t) if t.is_punct(':') => parts.push(Vec::new()),
                Some(t) => parts.last_mut().expect("part").push(t.tok),
                None => return self.syntax("unterminated aggregation bounds"),
            }
        }
        let number = |toks: &[Tok]| match toks {
            [Tok::Number(n)] => n.parse::<u64>().ok(),
            _ => None,
        };
        if parts.len() != 2 {
            return self.syntax("aggregation bounds must be [low:high]");
        }
        let Some(low) = number(&parts[0]) else {
            self.schema
                .diagnostics
                .push(Diagnostic::warning("non-literal lower bound ignored").at(open.line));
            return Ok(None);
        };
        let high = match parts[1].as_slice() {
            [Tok::Punct('?')] => None,
            other => match number(other) {
                Some(h) => Some(h),
                None => {
                    self.schema
                        .diagnostics
                        .push(Diagnostic::warning("non-literal upper bound ignored").at(open.line));
                    return Ok(None);
                }
            },
        };
        if let Some(h) = high {
            if low > h {
                self.schema.diagnostics.push(
                    Diagnostic::warning(format!("aggregation bounds [{low}:{h}] have low > high"))
                        .at(open.line),
                );
            }
        }
        Ok(Some(Bounds { low, high }))
    }

    fn entity(&mut self) -> Result<(), ExpressError> {
        let start = self.next().expect("ENTITY");
        let name = self.ident()?;
        let mut def = EntityDef {
            name: name.clone(),
            is_abstract: false,
            supertypes: Vec::new(),
            attributes: Vec::new(),
            inverses: Vec::new(),
            line: start.line,
        };
        // header up to the first ';'
        loop {
            if self.eat_kw("ABSTRACT") {
                def.is_abstract = true;
            } else if self.eat_kw("SUPERTYPE") {
                if !self.eat_kw("OF") {
                    return self.syntax("expected OF after SUPERTYPE");
                }
                self.skip_balanced_parens()?;
            } else if self.eat_kw("SUBTYPE") {
                if !self.eat_kw("OF") {
                    return self.syntax("expected OF after SUBTYPE");
                }
                def.supertypes = self.ident_list()?;
            } else if self.peek().is_some_and(|t| t.is_punct(';')) {
                self.pos += 1;
                break;
            } else {
                return self.unbalanced_or_syntax(&start, "malformed entity header");
            }
        }

        let mut clause = "ATTRIBUTES".to_string();
        loop {
            let Some(t) = self.peek().cloned() else {
                return Err(ExpressError::Unbalanced {
                    line: start.line,
                    column: start.column,
                    message: format!("ENTITY {name} is never closed"),
                });
            };
            if t.is_kw("END_ENTITY") {
                self.pos += 1;
                if self.peek().is_some_and(|t| t.is_punct(';')) {
                    self.pos += 1;
                }
                break;
            }
            if t.is_kw("ENTITY") || t.is_kw("END_SCHEMA") {
                return Err(ExpressError::Unbalanced {
                    line: start.line,
                    column: start.column,
                    message: format!("ENTITY {name} is not closed before line {}", t.line),
                });
            }
            if let Some(kw) = CLAUSE_KEYWORDS.iter().find(|kw| t.is_kw(kw)) {
                self.pos += 1;
                clause = kw.to_string();
                continue;
            }
            match clause.as_str() {
                "ATTRIBUTES" => self.attribute(&mut def)?,
                "INVERSE" => self.inverse(&mut def)?,
                _ => self.skip_clause(&name, &clause, t.line),
            }
        }
        let k = key(&name);
        match self.schema.entities.entry(k) {
            std::collections::btree_map::Entry::Occupied(_) => self.schema.diagnostics.push(
                Diagnostic::warning(format!("duplicate entity {name} ignored")).at(start.line),
            ),
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(def);
            }
        }
        Ok(())
    }

    fn unbalanced_or_syntax<T>(&self, start: &Token, message: &str) -> Result<T, ExpressError> {
        if self.peek().is_none() || self.at_kw("ENTITY") {
            Err(ExpressError::Unbalanced {
                line: start.line,
                column: start.column,
                message: message.into(),
            })
        } else {
            self.syntax(message)
        }
    }

    /// Skip one statement of an uninterpreted clause (up to its ';').
    fn skip_clause(&mut self, entity: &str, clause: &str, line: usize) {
        let mut depth = 0i32;
        let mut end_line = line;
        while let Some(t) = self.peek() {
            if depth == 0 && (t.is_kw("END_ENTITY") || t.is_kw("ENTITY")) {
                break;
            }
            let t = self.next().expect("token");
            end_line = t.line;
            match t.tok {
                Tok::Punct('(') => depth += 1,
                Tok::Punct(')') => depth -= 1,
                Tok::Punct(';') if depth <= 0 => break,
                _ => {}
            }
        }
        self.record_skip(Some(entity), clause, line, end_line);
    }

    fn record_skip(
        &mut self,
        entity: Option<&str>,
        construct: &str,
        start_line: usize,
        end_line: usize,
    ) {
        // consecutive statements of one clause collapse into a single span
        if let Some(last) = self.schema.skipped.last_mut() {
            if last.entity.as_deref() == entity
                && last.construct == construct
                && last.end_line <= start_line
            {
                last.end_line = end_line;
                return;
            }
        }
        self.schema.skipped.push(SkippedSpan {
            entity: entity.map(str::to_string),
            construct: construct.to_string(),
            start_line,
            end_line,
        });
    }

    fn attribute(&mut self, def: &mut EntityDef) -> Result<(), ExpressError> {
        let start = self.peek().cloned().expect("token");
        if start.is_kw("SELF") {
            // redeclared inherited attribute: SELF\IfcX.Attr : …;
            self.skip_to_semicolon();
            let end = self.last_location().0;
            self.record_skip(Some(&def.name), "REDECLARATION", start.line, end);
            return Ok(());
        }
        let mut names = Vec::new();
        let parsed = (|| -> Result<(bool, Vec<Aggregation>, String), ExpressError> {
            loop {
                names.push(self.ident()?);
                if self.peek().is_some_and(|t| t.is_punct(',')) {
                    self.pos += 1;
                    continue;
                }
                break;
            }
            self.expect_punct(':')?;
            let optional = self.eat_kw("OPTIONAL");
            let (aggs, base) = self.type_spec()?;
            self.expect_punct(';')?;
            Ok((optional, aggs, base))
        })();
        match parsed {
            Ok((is_optional, aggregation, type_name)) => {
                for name in names {
                    def.attributes.push(AttributeDef {
                        name,
                        type_name: type_name.clone(),
                        is_optional,
                        aggregation: aggregation.clone(),
                    });
                }
            }
            Err(_) => {
                self.pos = self
                    .toks
                    .iter()
                    .position(|t| std::ptr::eq(t, &start))
                    .unwrap_or(self.pos);
                self.skip_to_semicolon_within_entity();
                let end = self.last_location().0;
                self.record_skip(Some(&def.name), "UNRECOGNISED", start.line, end);
            }
        }
        Ok(())
    }

    fn skip_to_semicolon_within_entity(&mut self) {
        let mut depth = 0i32;
        while let Some(t) = self.peek() {
            if depth == 0 && CLAUSE_KEYWORDS.iter().any(|kw| t.is_kw(kw)) {
                return;
            }
            let t = self.next().expect("token");
            match t.tok {
                Tok::Punct('(') => depth += 1,
                Tok::Punct(')') => depth -= 1,
                Tok::Punct(';') if depth <= 0 => return,
                _ => {}
            }
        }
    }

    fn inverse(&mut self, def: &mut EntityDef) -> Result<(), ExpressError> {
        let start_pos = self.pos;
        let start_line = self.peek().map_or(0, |t| t.line);
        let parsed = (|| -> Result<InverseAttributeDef, ExpressError> {
            let name = self.ident()?;
            self.expect_punct(':')?;
            if self.eat_kw("SET") || self.eat_kw("BAG") {
                if self.peek().is_some_and(|t| t.is_punct('[')) {
                    self.bounds()?;
                }
                if !self.eat_kw("OF") {
                    return self.syntax("expected OF");
                }
            }
            let relationship_entity = self.ident()?;
            if !self.eat_kw("FOR") {
                return self.syntax("expected FOR in inverse attribute");
            }
            let mut for_attribute = self.ident()?;
            if self.peek().is_some_and(|t| t.is_punct('.')) {
                // FOR Entity.Attr
                self.pos += 1;
                for_attribute = self.ident()?;
            }
            self.expect_punct(';')?;
            Ok(InverseAttributeDef {
                name,
                relationship_entity,
                for_attribute,
            })
        })();
        match parsed {
            Ok(inv) => def.inverses.push(inv),
            Err(_) => {
                self.pos = start_pos;
                self.skip_to_semicolon_within_entity();
                let end = self.last_location().0;
                self.record_skip(Some(&def.name), "UNRECOGNISED INVERSE", start_line, end);
            }
        }
        Ok(())
    }
}

fn validate(schema: &mut ExpressSchema) {
    let mut diags = Vec::new();
    let mut unresolved = BTreeSet::new();
    for e in schema.entities.values() {
        for sup in &e.supertypes {
            if schema.entity(sup).is_none() {
                unresolved.insert(sup.clone());
                diags.push(
                    Diagnostic::warning(format!(
                        "{}: supertype {sup} is not declared in this schema",
                        e.name
                    ))
                    .at(e.line),
                );
            }
        }
        let mut seen: BTreeMap<String, &str> = BTreeMap::new();
        for (owner, attr) in schema.all_attributes(&e.name) {
            if let Some(prev) = seen.insert(key(&attr.name), &owner.name) {
                diags.push(
                    Diagnostic::warning(format!(
                        "{}: attribute {} declared on both {prev} and {}",
                        e.name, attr.name, owner.name
                    ))
                    .at(e.line),
                );
            }
        }
        for inv in &e.inverses {
            match schema.entity(&inv.relationship_entity) {
                None => diags.push(
                    Diagnostic::warning(format!(
                        "{}.{}: relationship entity {} is not declared",
                        e.name, inv.name, inv.relationship_entity
                    ))
                    .at(e.line),
                ),
                Some(rel)
                    if schema
                        .find_attribute(&rel.name, &inv.for_attribute)
                        .is_none() =>
                {
                    diags.push(
                        Diagnostic::warning(format!(
                            "{}.{}: FOR {} is not an attribute of {}",
                            e.name, inv.name, inv.for_attribute, rel.name
                        ))
                        .at(e.line),
                    )
                }
                Some(_) => {}
            }
        }
    }
    schema.unresolved = unresolved;
    schema.diagnostics.extend(diags);
}
