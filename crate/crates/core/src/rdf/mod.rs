//! RDF terms, triples and in-memory graphs.
//!
//! A [`Graph`] is a set of [`Triple`]s plus a prefix table used when
//! writing Turtle. Iteration order is always sorted by subject, predicate
//! and object, which makes every serialization deterministic.

mod iso;
mod syntax;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use syntax::{parse, serialize, Format};

use crate::vocab::xsd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("not an absolute IRI: {0:?}")]
    RelativeIri(String),
    #[error("IRI contains a forbidden character: {0:?}")]
    IriCharacter(String),
    #[error("malformed prefix {0:?}: expected [A-Za-z][A-Za-z0-9_]* or the empty prefix")]
    BadPrefix(String),
    #[error("malformed blank node label {0:?}")]
    BadBlankLabel(String),
    #[error("malformed language tag {0:?}")]
    BadLanguageTag(String),
    #[error("{0} cannot be used as a triple subject")]
    LiteralSubject(String),
    #[error("{0} cannot be used as a predicate")]
    NonIriPredicate(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

/// An absolute IRI.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(iri: impl Into<String>) -> Result<Self, RdfError> {
        let iri = iri.into();
        if !has_scheme(&iri) {
            return Err(RdfError::RelativeIri(iri));
        }
        if iri.chars().any(is_forbidden_iri_char) {
            return Err(RdfError::IriCharacter(iri));
        }
        Ok(Iri(iri))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

fn has_scheme(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

pub(crate) fn is_forbidden_iri_char(c: char) -> bool {
    c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

/// A blank node, identified by a label local to one document.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        if !is_valid_blank_label(&label) {
            return Err(RdfError::BadBlankLabel(label));
        }
        Ok(BlankNode(label))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_blank_label(label: &str) -> bool {
    let bytes = label.as_bytes();
    match (bytes.first(), bytes.last()) {
        (Some(f), Some(l)) => {
            (f.is_ascii_alphanumeric() || *f == b'_')
                && *l != b'.'
                && bytes
                    .iter()
                    .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'.'))
        }
        _ => false,
    }
}

/// A literal: lexical form with either a datatype, a language tag, or neither.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Some(datatype),
            language: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Result<Self, RdfError> {
        let tag = tag.into();
        if !is_valid_lang_tag(&tag) {
            return Err(RdfError::BadLanguageTag(tag));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: None,
            language: Some(tag),
        })
    }

    /// `"lex"^^xsd:string`
    pub fn string(lexical: impl Into<String>) -> Self {
        Self::typed(lexical, xsd::string())
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// Numeric value when the literal has a numeric XSD datatype.
    pub fn as_f64(&self) -> Option<f64> {
        let dt = self.datatype.as_ref()?;
        if xsd::is_numeric(dt) {
            self.lexical.trim().parse().ok()
        } else {
            None
        }
    }
}

pub(crate) fn is_valid_lang_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    !first.is_empty()
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(iri: &str) -> Result<Self, RdfError> {
        Iri::new(iri).map(Term::Iri)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&syntax::ntriples_term(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, RdfError> {
        if let Term::Literal(_) = subject {
            return Err(RdfError::LiteralSubject(subject.to_string()));
        }
        let Term::Iri(predicate) = predicate else {
            return Err(RdfError::NonIriPredicate(predicate.to_string()));
        };
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    /// Build from parts that already satisfy the position constraints.
    pub fn from_parts(subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>) -> Self {
        let subject = subject.into();
        assert!(!matches!(subject, Term::Literal(_)), "literal subject");
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register (or replace) a namespace prefix. The empty prefix is the
    /// default namespace.
    pub fn register_prefix(&mut self, prefix: &str, namespace: &str) -> Result<(), RdfError> {
        if !is_valid_prefix(prefix) {
            return Err(RdfError::BadPrefix(prefix.to_string()));
        }
        let ns = Iri::new(namespace)?;
        self.prefixes.insert(prefix.to_string(), ns);
        Ok(())
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    pub fn namespace(&self, prefix: &str) -> Option<&Iri> {
        self.prefixes.get(prefix)
    }

    /// Returns `true` when the triple was not yet present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn add(
        &mut self,
        subject: impl Into<Term>,
        predicate: &Iri,
        object: impl Into<Term>,
    ) -> bool {
        self.insert(Triple::from_parts(subject, predicate.clone(), object))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn has(&self, subject: &Term, predicate: &Iri, object: &Term) -> bool {
        self.triples.contains(&Triple {
            subject: subject.clone(),
            predicate: predicate.clone(),
            object: object.clone(),
        })
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Triples matching a pattern; `None` is a wildcard.
    pub fn matching<'a>(
        &'a self,
        subject: Option<&'a Term>,
        predicate: Option<&'a Iri>,
        object: Option<&'a Term>,
    ) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples.iter().filter(move |t| {
            subject.is_none_or(|s| &t.subject == s)
                && predicate.is_none_or(|p| &t.predicate == p)
                && object.is_none_or(|o| &t.object == o)
        })
    }

    pub fn objects<'a>(
        &'a self,
        subject: &'a Term,
        predicate: &'a Iri,
    ) -> impl Iterator<Item = &'a Term> + 'a {
        self.matching(Some(subject), Some(predicate), None)
            .map(|t| &t.object)
    }

    /// Union with `other`, including its prefixes (ours win on conflict).
    pub fn extend(&mut self, other: &Graph) {
        self.triples.extend(other.triples.iter().cloned());
        for (p, ns) in &other.prefixes {
            self.prefixes.entry(p.clone()).or_insert_with(|| ns.clone());
        }
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        iso::isomorphic(&self.triples, &other.triples)
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

pub(crate) fn is_valid_prefix(prefix: &str) -> bool {
    let mut chars = prefix.chars();
    match chars.next() {
        None => true,
        Some(c) => c.is_ascii_alphabetic() && chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
    }
}
