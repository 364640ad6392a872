//! Turtle and N-Triples reading and writing.
//!
//! Output is canonical: prefixes sorted by name, triples sorted by
//! subject/predicate/object. Turtle groups each subject's predicates with
//! `;` and repeated objects with `,`. N-Triples escapes everything outside
//! printable ASCII with `\u`/`\U`.

use std::fmt::Write as _;

use super::{
    is_forbidden_iri_char, is_valid_blank_label, is_valid_lang_tag, BlankNode, Graph, Iri, Literal,
    RdfError, Term, Triple,
};
use crate::vocab::{self, xsd};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Turtle,
    NTriples,
}

impl Format {
    /// Guess from a file extension (`.nt` → N-Triples, anything else Turtle).
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("nt") => Format::NTriples,
            _ => Format::Turtle,
        }
    }
}

pub fn serialize(graph: &Graph, format: Format) -> String {
    match format {
        Format::NTriples => {
            let mut out = String::new();
            for t in graph.iter() {
                let _ = writeln!(out, "{t}");
            }
            out
        }
        Format::Turtle => write_turtle(graph),
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, RdfError> {
    let mut parser = Parser::new(text, format);
    parser.document()?;
    Ok(parser.graph)
}

pub(crate) fn ntriples_term(term: &Term) -> String {
    let mut out = String::new();
    match term {
        Term::Iri(i) => write_iri_escaped(&mut out, i),
        Term::Blank(b) => {
            out.push_str("_:");
            out.push_str(b.label());
        }
        Term::Literal(l) => {
            write_string(&mut out, l.lexical(), true);
            if let Some(lang) = l.language() {
                out.push('@');
                out.push_str(lang);
            } else if let Some(dt) = l.datatype() {
                out.push_str("^^");
                write_iri_escaped(&mut out, dt);
            }
        }
    }
    out
}

fn write_iri_escaped(out: &mut String, iri: &Iri) {
    out.push('<');
    for c in iri.as_str().chars() {
        push_char_escaped(out, c);
    }
    out.push('>');
}

fn push_char_escaped(out: &mut String, c: char) {
    if c.is_ascii() {
        out.push(c);
    } else if (c as u32) <= 0xFFFF {
        let _ = write!(out, "\\u{:04X}", c as u32);
    } else {
        let _ = write!(out, "\\U{:08X}", c as u32);
    }
}

fn write_string(out: &mut String, s: &str, ascii_only: bool) {
    out.push('"');
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c == '\u{7F}' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c if ascii_only => push_char_escaped(out, c),
            c => out.push(c),
        }
    }
    out.push('"');
}

struct Compactor<'a> {
    // longest namespace first so the most specific prefix wins
    prefixes: Vec<(&'a str, &'a str)>,
}

impl<'a> Compactor<'a> {
    fn new(graph: &'a Graph) -> Self {
        let mut prefixes: Vec<(&str, &str)> = graph
            .prefixes()
            .iter()
            .map(|(p, ns)| (p.as_str(), ns.as_str()))
            .collect();
        prefixes.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
        Compactor { prefixes }
    }

    fn iri(&self, out: &mut String, iri: &Iri) {
        for (prefix, ns) in &self.prefixes {
            if let Some(local) = iri.as_str().strip_prefix(ns) {
                if is_simple_local(local) {
                    out.push_str(prefix);
                    out.push(':');
                    out.push_str(local);
                    return;
                }
            }
        }
        out.push('<');
        out.push_str(iri.as_str());
        out.push('>');
    }

    fn term(&self, out: &mut String, term: &Term) {
        match term {
            Term::Iri(i) => self.iri(out, i),
            Term::Blank(b) => {
                out.push_str("_:");
                out.push_str(b.label());
            }
            Term::Literal(l) => {
                write_string(out, l.lexical(), false);
                if let Some(lang) = l.language() {
                    out.push('@');
                    out.push_str(lang);
                } else if let Some(dt) = l.datatype() {
                    out.push_str("^^");
                    self.iri(out, dt);
                }
            }
        }
    }
}

/// Local names we are willing to write in prefixed form.
fn is_simple_local(local: &str) -> bool {
    let bytes = local.as_bytes();
    match (bytes.first(), bytes.last()) {
        (None, _) => true,
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

fn write_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in graph.prefixes() {
        let _ = writeln!(out, "@prefix {prefix}: <{}> .", ns.as_str());
    }
    let compactor = Compactor::new(graph);
    let rdf_type = vocab::rdf::type_();

    let mut prev_subject: Option<&Term> = None;
    let mut prev_predicate: Option<&Iri> = None;
    let mut triples = graph.iter().peekable();
    if triples.peek().is_some() && !graph.prefixes().is_empty() {
        out.push('\n');
    }
    for t in triples {
        if prev_subject == Some(t.subject()) {
            if prev_predicate == Some(t.predicate()) {
                out.push_str(" ,\n        ");
            } else {
                out.push_str(" ;\n    ");
                write_predicate(&compactor, &mut out, t.predicate(), &rdf_type);
                out.push(' ');
            }
        } else {
            if prev_subject.is_some() {
                out.push_str(" .\n");
            }
            compactor.term(&mut out, t.subject());
            out.push(' ');
            write_predicate(&compactor, &mut out, t.predicate(), &rdf_type);
            out.push(' ');
        }
        compactor.term(&mut out, t.object());
        prev_subject = Some(t.subject());
        prev_predicate = Some(t.predicate());
    }
    if prev_subject.is_some() {
        out.push_str(" .\n");
    }
    out
}

fn write_predicate(c: &Compactor<'_>, out: &mut String, p: &Iri, rdf_type: &Iri) {
    if p == rdf_type {
        out.push('a');
    } else {
        c.iri(out, p);
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    format: Format,
    graph: Graph,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, format: Format) -> Self {
        let text = text.strip_prefix('\u{FEFF}').unwrap_or(text);
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            format,
            graph: Graph::new(),
            _src: text,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, RdfError> {
        Err(RdfError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn expect(&mut self, c: char) -> Result<(), RdfError> {
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => self.err(format!("expected '{c}', found '{x}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn starts_with_keyword_ci(&self, kw: &str) -> bool {
        kw.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|x| x.eq_ignore_ascii_case(&c)))
            && !self
                .peek_at(kw.len())
                .is_some_and(|c| c.is_alphanumeric() || c == '_')
    }

    /// Skip whitespace and comments; in N-Triples mode newlines are only
    /// skipped when `newlines` is set.
    fn skip_ws(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c == '\n' || c == '\r' {
                if !newlines {
                    return;
                }
                self.bump();
            } else if c.is_whitespace() {
                self.bump();
            } else {
                return;
            }
        }
    }

    fn ws(&mut self) {
        let nl = self.format == Format::Turtle;
        self.skip_ws(nl);
    }

    fn document(&mut self) -> Result<(), RdfError> {
        loop {
            self.skip_ws(true);
            let Some(c) = self.peek() else {
                return Ok(());
            };
            if self.format == Format::Turtle {
                if c == '@' {
                    self.at_directive()?;
                    continue;
                }
                if self.starts_with_keyword_ci("PREFIX") {
                    self.sparql_prefix()?;
                    continue;
                }
                if self.starts_with_keyword_ci("BASE") {
                    return self.err("BASE directives are not supported");
                }
            }
            self.triples()?;
        }
    }

    fn at_directive(&mut self) -> Result<(), RdfError> {
        if self.starts_with("@prefix") {
            for _ in 0..7 {
                self.bump();
            }
            self.ws();
            self.prefix_decl()?;
            self.ws();
            self.expect('.')
        } else {
            self.err("unsupported directive (only @prefix is accepted)")
        }
    }

    fn sparql_prefix(&mut self) -> Result<(), RdfError> {
        for _ in 0..6 {
            self.bump();
        }
        self.ws();
        self.prefix_decl()
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_whitespace() {
                return self.err("expected ':' after prefix name");
            }
            prefix.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.ws();
        let ns = self.iriref()?;
        if let Err(e) = self.graph.register_prefix(&prefix, ns.as_str()) {
            return self.err(e.to_string());
        }
        Ok(())
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        let subject = self.subject()?;
        self.ws();
        loop {
            let predicate = self.verb()?;
            self.ws();
            loop {
                let object = self.object()?;
                self.graph.insert(Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                self.ws();
                if self.format == Format::Turtle && self.peek() == Some(',') {
                    self.bump();
                    self.ws();
                    continue;
                }
                break;
            }
            if self.format == Format::Turtle && self.peek() == Some(';') {
                while self.peek() == Some(';') {
                    self.bump();
                    self.ws();
                }
                if self.peek() == Some('.') {
                    break;
                }
                continue;
            }
            break;
        }
        match self.peek() {
            Some('.') => {
                self.bump();
                Ok(())
            }
            Some('\n') | Some('\r') | None => self.err("statement not terminated by '.'"),
            Some(c) => self.err(format!("expected '.', found '{c}'")),
        }
    }

    fn subject(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Term::Blank(self.blank()?)),
            Some(_) if self.format == Format::Turtle => Ok(Term::Iri(self.prefixed_name()?)),
            Some(c) => self.err(format!("unexpected '{c}' at start of subject")),
            None => self.err("unexpected end of input"),
        }
    }

    fn verb(&mut self) -> Result<Iri, RdfError> {
        match self.peek() {
            Some('<') => self.iriref(),
            Some('a')
                if self.format == Format::Turtle
                    && self
                        .peek_at(1)
                        .is_none_or(|c| c.is_whitespace() || c == '<' || c == '"') =>
            {
                self.bump();
                Ok(vocab::rdf::type_())
            }
            Some(_) if self.format == Format::Turtle => self.prefixed_name(),
            Some(c) => self.err(format!("unexpected '{c}' at start of predicate")),
            None => self.err("unexpected end of input, expected predicate"),
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Term::Blank(self.blank()?)),
            Some('"') => self.literal('"'),
            Some('\'') if self.format == Format::Turtle => self.literal('\''),
            Some(c)
                if self.format == Format::Turtle
                    && (c.is_ascii_digit() || matches!(c, '+' | '-' | '.')) =>
            {
                self.numeric()
            }
            Some(_)
                if self.format == Format::Turtle
                    && (self.starts_with_keyword("true") || self.starts_with_keyword("false")) =>
            {
                let value = if self.starts_with("true") {
                    "true"
                } else {
                    "false"
                };
                for _ in 0..value.len() {
                    self.bump();
                }
                Ok(Term::Literal(Literal::typed(value, xsd::boolean())))
            }
            Some(_) if self.format == Format::Turtle => Ok(Term::Iri(self.prefixed_name()?)),
            Some(c) => self.err(format!("unexpected '{c}' at start of object")),
            None => self.err("unexpected end of input, expected object"),
        }
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        self.starts_with(kw)
            && !self
                .peek_at(kw.len())
                .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == ':')
    }

    fn iriref(&mut self) -> Result<Iri, RdfError> {
        self.expect('<')?;
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => s.push(self.uchar()?),
                Some(c) if is_forbidden_iri_char(c) => {
                    return self.err(format!("character {c:?} not allowed in IRI"))
                }
                Some(c) => s.push(c),
                None => return self.err("unterminated IRI"),
            }
        }
        Iri::new(s).or_else(|e| self.err(e.to_string()))
    }

    fn uchar(&mut self) -> Result<char, RdfError> {
        let n = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err("bad escape, expected \\u or \\U"),
        };
        let mut v = 0u32;
        for _ in 0..n {
            let Some(d) = self.bump().and_then(|c| c.to_digit(16)) else {
                return self.err("bad hex digit in escape");
            };
            v = v * 16 + d;
        }
        char::from_u32(v).map_or_else(|| self.err(format!("invalid code point U+{v:X}")), Ok)
    }

    fn blank(&mut self) -> Result<BlankNode, RdfError> {
        self.bump();
        self.bump();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // a trailing '.' terminates the statement, it is not part of the label
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        if !is_valid_blank_label(&label) {
            return self.err(format!("malformed blank node label {label:?}"));
        }
        Ok(BlankNode(label))
    }

    fn prefixed_name(&mut self) -> Result<Iri, RdfError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return self.err(format!("unexpected '{c}'"));
            }
            prefix.push(c);
            self.bump();
        }
        self.expect(':')?;
        let mut local = String::new();
        while let Some(c) = self.peek() {
            let dot_inside = c == '.'
                && self
                    .peek_at(1)
                    .is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-' | ':' | '.'));
            if c.is_alphanumeric() || matches!(c, '_' | '-' | ':') || dot_inside {
                local.push(c);
                self.bump();
            } else if c == '%' {
                local.push(c);
                self.bump();
                for _ in 0..2 {
                    match self.bump() {
                        Some(h) if h.is_ascii_hexdigit() => local.push(h),
                        _ => return self.err("bad percent escape in local name"),
                    }
                }
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return self.err("bad escape in local name"),
                }
            } else {
                break;
            }
        }
        let Some(ns) = self.graph.namespace(&prefix) else {
            return self.err(format!("undeclared prefix {prefix:?}"));
        };
        let full = format!("{}{}", ns.as_str(), local);
        Iri::new(full).or_else(|e| self.err(e.to_string()))
    }

    fn literal(&mut self, quote: char) -> Result<Term, RdfError> {
        let long = self.format == Format::Turtle
            && self.peek_at(1) == Some(quote)
            && self.peek_at(2) == Some(quote);
        let lexical = if long {
            self.long_string(quote)?
        } else {
            self.short_string(quote)?
        };
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if !is_valid_lang_tag(&tag) {
                    return self.err(format!("malformed language tag {tag:?}"));
                }
                Ok(Term::Literal(Literal {
                    lexical,
                    datatype: None,
                    language: Some(tag),
                }))
            }
            Some('^') => {
                self.bump();
                self.expect('^')?;
                let dt = match self.peek() {
                    Some('<') => self.iriref()?,
                    Some(_) if self.format == Format::Turtle => self.prefixed_name()?,
                    _ => return self.err("expected datatype IRI"),
                };
                Ok(Term::Literal(Literal::typed(lexical, dt)))
            }
            _ => Ok(Term::Literal(Literal::simple(lexical))),
        }
    }

    fn short_string(&mut self, quote: char) -> Result<String, RdfError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => return Ok(s),
                Some('\\') => s.push(self.string_escape()?),
                Some('\n') | Some('\r') | None => return self.err("unterminated string literal"),
                Some(c) => s.push(c),
            }
        }
    }

    fn long_string(&mut self, quote: char) -> Result<String, RdfError> {
        for _ in 0..3 {
            self.bump();
        }
        let mut s = String::new();
        loop {
            if self.peek() == Some(quote)
                && self.peek_at(1) == Some(quote)
                && self.peek_at(2) == Some(quote)
            {
                for _ in 0..3 {
                    self.bump();
                }
                return Ok(s);
            }
            match self.bump() {
                Some('\\') => s.push(self.string_escape()?),
                Some(c) => s.push(c),
                None => return self.err("unterminated long string literal"),
            }
        }
    }

    fn string_escape(&mut self) -> Result<char, RdfError> {
        match self.peek() {
            Some('u') | Some('U') => self.uchar(),
            Some(c) => {
                self.bump();
                Ok(match c {
                    't' => '\t',
                    'b' => '\u{8}',
                    'n' => '\n',
                    'r' => '\r',
                    'f' => '\u{C}',
                    '"' => '"',
                    '\'' => '\'',
                    '\\' => '\\',
                    other => return self.err(format!("unknown escape \\{other}")),
                })
            }
            None => self.err("unterminated escape"),
        }
    }

    fn numeric(&mut self) -> Result<Term, RdfError> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        let mut has_dot = false;
        let mut has_exp = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else if c == '.'
                && !has_dot
                && !has_exp
                && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())
            {
                has_dot = true;
                s.push(c);
                self.bump();
            } else if (c == 'e' || c == 'E') && !has_exp {
                has_exp = true;
                s.push(c);
                self.bump();
                if let Some(sign @ ('+' | '-')) = self.peek() {
                    s.push(sign);
                    self.bump();
                }
            } else {
                break;
            }
        }
        if !s.chars().any(|c| c.is_ascii_digit()) {
            return self.err(format!("malformed number {s:?}"));
        }
        let dt = if has_exp {
            xsd::double()
        } else if has_dot {
            xsd::decimal()
        } else {
            xsd::integer()
        };
        Ok(Term::Literal(Literal::typed(s, dt)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn single_triple_is_one_line() {
        let mut g = Graph::new();
        g.add(iri("http://e/s"), &iri("http://e/p"), iri("http://e/o"));
        let nt = serialize(&g, Format::NTriples);
        assert_eq!(nt, "<http://e/s> <http://e/p> <http://e/o> .\n");
        let ttl = serialize(&g, Format::Turtle);
        assert_eq!(ttl.lines().count(), 1);
        assert!(ttl.trim_end().ends_with('.'));
    }

    #[test]
    fn empty_graph() {
        let mut g = Graph::new();
        assert_eq!(serialize(&g, Format::NTriples), "");
        g.register_prefix("ifcwod", vocab::IFCWOD).unwrap();
        assert_eq!(
            serialize(&g, Format::Turtle),
            "@prefix ifcwod: <http://buildingsmart.org/ontology/ifcwod#> .\n"
        );
        assert_eq!(serialize(&g, Format::NTriples), "");
    }

    #[test]
    fn default_prefix_serializes_as_colon_local() {
        let mut g = Graph::new();
        g.register_prefix("", "http://e/").unwrap();
        g.add(iri("http://e/s"), &iri("http://e/p"), iri("http://e/o"));
        assert_eq!(
            serialize(&g, Format::Turtle),
            "@prefix : <http://e/> .\n\n:s :p :o .\n"
        );
    }

    #[test]
    fn language_tag_verbatim_and_utf8() {
        let mut g = Graph::new();
        g.register_prefix("rdfs", vocab::RDFS).unwrap();
        g.add(
            iri("http://e/ref"),
            &vocab::rdfs::label(),
            Literal::lang("参照記号", "ja-JP").unwrap(),
        );
        let ttl = serialize(&g, Format::Turtle);
        assert!(ttl.contains("\"参照記号\"@ja-JP"), "{ttl}");
        let nt = serialize(&g, Format::NTriples);
        assert!(
            nt.contains("\"\\u53C2\\u7167\\u8A18\\u53F7\"@ja-JP"),
            "{nt}"
        );
        assert!(nt.is_ascii());
    }

    #[test]
    fn minimal_typed_literal() {
        let g = parse(
            "<http://e/a> <http://e/b> \"x\"^^<http://e/t> .",
            Format::NTriples,
        )
        .unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        let lit = t.object().as_literal().unwrap();
        assert_eq!(lit.lexical(), "x");
        assert_eq!(lit.datatype().unwrap().as_str(), "http://e/t");
    }

    #[test]
    fn missing_dot_reports_line() {
        let text = "<http://e/a> <http://e/b> <http://e/c> .\n<http://e/a> <http://e/b> <http://e/d>\n<http://e/a> <http://e/b> <http://e/e> .\n";
        match parse(text, Format::NTriples) {
            Err(RdfError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn turtle_sugar() {
        let text = r#"@prefix ex: <http://e/> .
PREFIX x: <http://x/>
ex:s a ex:C ; ex:p 1, 2.5, 1e3, true ;
   x:q "long"@en-GB , """multi
line""" , 'single' .
_:b1 ex:p ex:s .
"#;
        let g = parse(text, Format::Turtle).unwrap();
        assert_eq!(g.len(), 9);
        assert!(g.has(
            &Term::Iri(iri("http://e/s")),
            &vocab::rdf::type_(),
            &Term::Iri(iri("http://e/C"))
        ));
        assert!(g.has(
            &Term::Iri(iri("http://e/s")),
            &iri("http://e/p"),
            &Term::Literal(Literal::typed("2.5", xsd::decimal()))
        ));
    }

    #[test]
    fn undeclared_prefix_is_error() {
        assert!(matches!(
            parse("ex:a ex:b ex:c .", Format::Turtle),
            Err(RdfError::Syntax { .. })
        ));
    }

    #[test]
    fn escapes_round_trip() {
        let mut g = Graph::new();
        g.add(
            iri("http://e/s"),
            &iri("http://e/p"),
            Literal::simple("quote \" back \\ nl \n tab \t ctrl \u{1} emoji 🦀"),
        );
        for f in [Format::Turtle, Format::NTriples] {
            let back = parse(&serialize(&g, f), f).unwrap();
            assert_eq!(
                back.iter().collect::<Vec<_>>(),
                g.iter().collect::<Vec<_>>()
            );
        }
    }
}
