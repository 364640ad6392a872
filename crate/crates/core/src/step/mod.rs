//! Reader and writer for the clear text encoding of STEP exchange files
//! (`.ifc`, `.stp`).

mod strings;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::diag::Diagnostic;
pub use strings::{decode_string, encode_string};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate instance id #{id}")]
    DuplicateId { id: u64, line: usize },
    #[error("line {line}, column {column}: unterminated string")]
    UnterminatedString { line: usize, column: usize },
    #[error("line {line}, column {column}: parameters nested deeper than {limit}")]
    TooDeep {
        line: usize,
        column: usize,
        limit: usize,
    },
    #[error("line {line}: record longer than {limit} bytes")]
    RecordTooLong { line: usize, limit: usize },
    #[error("malformed string escape {0}")]
    BadEscape(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepParam {
    Unset,
    Derived,
    Integer(i64),
    /// `lexical` is the token as written, kept for exact rewriting.
    Real {
        value: f64,
        lexical: String,
    },
    String(String),
    Binary(String),
    Enum(String),
    Reference(u64),
    Typed(String, Box<StepParam>),
    List(Vec<StepParam>),
}

impl StepParam {
    pub fn real(value: f64) -> StepParam {
        let mut lexical = format!("{value:?}");
        if !lexical.contains(['.', 'e', 'E']) {
            lexical.push('.');
        }
        StepParam::Real {
            value,
            lexical: lexical.to_uppercase(),
        }
    }

    pub fn as_reference(&self) -> Option<u64> {
        match self {
            StepParam::Reference(id) => Some(*id),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            StepParam::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[StepParam]> {
        match self {
            StepParam::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn is_unset(&self) -> bool {
        matches!(self, StepParam::Unset | StepParam::Derived)
    }

    /// References anywhere inside this parameter, in order.
    pub fn references(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.collect_references(&mut out);
        out
    }

    fn collect_references(&self, out: &mut Vec<u64>) {
        match self {
            StepParam::Reference(id) => out.push(*id),
            StepParam::Typed(_, inner) => inner.collect_references(out),
            StepParam::List(items) => items.iter().for_each(|p| p.collect_references(out)),
            _ => {}
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            StepParam::Unset => out.push('$'),
            StepParam::Derived => out.push('*'),
            StepParam::Integer(n) => {
                let _ = write!(out, "{n}");
            }
            StepParam::Real { lexical, .. } => out.push_str(lexical),
            StepParam::String(s) => {
                out.push('\'');
                out.push_str(&encode_string(s));
                out.push('\'');
            }
            StepParam::Binary(b) => {
                let _ = write!(out, "\"{b}\"");
            }
            StepParam::Enum(e) => {
                let _ = write!(out, ".{e}.");
            }
            StepParam::Reference(id) => {
                let _ = write!(out, "#{id}");
            }
            StepParam::Typed(kw, inner) => {
                out.push_str(kw);
                out.push('(');
                inner.write(out);
                out.push(')');
            }
            StepParam::List(items) => {
                out.push('(');
                write_params(items, out);
                out.push(')');
            }
        }
    }
}

fn write_params(params: &[StepParam], out: &mut String) {
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        p.write(out);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepInstance {
    pub id: u64,
    pub keyword: String,
    pub params: Vec<StepParam>,
    pub line: usize,
}

impl StepInstance {
    pub fn param(&self, index: usize) -> Option<&StepParam> {
        self.params.get(index)
    }
}

#[derive(Clone, Debug, Default)]
pub struct StepModel {
    /// HEADER records exactly as written, one per entry.
    pub header: Vec<String>,
    pub file_schema: Vec<String>,
    pub instances: BTreeMap<u64, StepInstance>,
    pub warnings: Vec<Diagnostic>,
}

impl StepModel {
    pub fn get(&self, id: u64) -> Option<&StepInstance> {
        self.instances.get(&id)
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// `(from, to)` pairs whose target id is not in the model.
    pub fn dangling_references(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for inst in self.instances.values() {
            for p in &inst.params {
                for r in p.references() {
                    if !self.instances.contains_key(&r) {
                        out.push((inst.id, r));
                    }
                }
            }
        }
        out
    }

    pub fn insert(&mut self, instance: StepInstance) -> Option<StepInstance> {
        self.instances.insert(instance.id, instance)
    }

    /// Next unused instance id.
    pub fn next_id(&self) -> u64 {
        self.instances.keys().next_back().map_or(1, |k| k + 1)
    }

    /// Serialize as an exchange file. The header is written back verbatim,
    /// or a minimal one is generated when none was read.
    pub fn to_spf(&self) -> String {
        let mut out = String::from("ISO-10303-21;\nHEADER;\n");
        if self.header.is_empty() {
            out.push_str("FILE_DESCRIPTION((''),'2;1');\n");
            out.push_str("FILE_NAME('','',(''),(''),'','','');\n");
            let schemas: Vec<String> = self
                .file_schema
                .iter()
                .map(|s| format!("'{}'", encode_string(s)))
                .collect();
            let _ = writeln!(out, "FILE_SCHEMA(({}));", schemas.join(","));
        } else {
            for h in &self.header {
                out.push_str(h);
                out.push('\n');
            }
        }
        out.push_str("ENDSEC;\nDATA;\n");
        for inst in self.instances.values() {
            let _ = write!(out, "#{}={}(", inst.id, inst.keyword);
            write_params(&inst.params, &mut out);
            out.push_str(");\n");
        }
        out.push_str("ENDSEC;\nEND-ISO-10303-21;\n");
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParseLimits {
    pub max_depth: usize,
    pub max_record_bytes: usize,
}

impl Default for ParseLimits {
    fn default() -> Self {
        ParseLimits {
            max_depth: 64,
            max_record_bytes: 16 * 1024 * 1024,
        }
    }
}

pub fn parse_spf(text: &str) -> Result<StepModel, StepError> {
    parse_spf_with(text, ParseLimits::default())
}

/// Parse raw file bytes (UTF-8, else Latin-1).
pub fn parse_spf_bytes(bytes: &[u8]) -> Result<StepModel, StepError> {
    parse_spf(&crate::diag::decode_text(bytes))
}

pub fn parse_spf_with(text: &str, limits: ParseLimits) -> Result<StepModel, StepError> {
    let mut p = Reader {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
        line: 1,
        line_start: 0,
        limits,
        record_start: 0,
        record_line: 1,
    };
    let mut model = StepModel::default();
    p.expect_word("ISO-10303-21")?;
    p.expect_byte(b';')?;
    p.expect_word("HEADER")?;
    p.expect_byte(b';')?;
    loop {
        p.skip_trivia()?;
        if p.peek_word_is("ENDSEC") {
            p.word()?;
            p.expect_byte(b';')?;
            break;
        }
        let start = p.pos;
        p.begin_record();
        let kw = p.word()?;
        p.expect_byte(b'(')?;
        let params = p.params_until_close(1)?;
        p.expect_byte(b';')?;
        model.header.push(text[start..p.pos].to_string());
        if kw.eq_ignore_ascii_case("FILE_SCHEMA") {
            if let Some(StepParam::List(items)) = params.first() {
                model.file_schema = items
                    .iter()
                    .filter_map(|s| s.as_str().map(str::to_string))
                    .collect();
            }
        }
    }
    loop {
        p.skip_trivia()?;
        if p.peek_word_is("END-ISO-10303-21") {
            p.word()?;
            p.expect_byte(b';')?;
            break;
        }
        if p.pos >= p.bytes.len() {
            return p.syntax("missing END-ISO-10303-21");
        }
        let section = p.word()?;
        p.skip_trivia()?;
        if p.peek() == Some(b'(') {
            p.pos += 1;
            p.params_until_close(1)?;
        }
        p.expect_byte(b';')?;
        let is_data = section.eq_ignore_ascii_case("DATA");
        loop {
            p.skip_trivia()?;
            if p.peek_word_is("ENDSEC") {
                p.word()?;
                p.expect_byte(b';')?;
                break;
            }
            if p.pos >= p.bytes.len() {
                return p.syntax(format!("{section} section is not closed by ENDSEC"));
            }
            let record = p.record()?;
            match record {
                Some(inst) if is_data => {
                    if model.instances.contains_key(&inst.id) {
                        return Err(StepError::DuplicateId {
                            id: inst.id,
                            line: inst.line,
                        });
                    }
                    model.instances.insert(inst.id, inst);
                }
                Some(_) => {}
                None => model
                    .warnings
                    .push(Diagnostic::warning("complex entity instance skipped").at(p.record_line)),
            }
        }
    }
    p.skip_trivia()?;
    if p.pos < p.bytes.len() {
        model
            .warnings
            .push(Diagnostic::warning("content after END-ISO-10303-21 ignored").at(p.line));
    }
    for (from, to) in model.dangling_references() {
        let line = model.instances[&from].line;
        model
            .warnings
            .push(Diagnostic::warning(format!("#{from} references missing #{to}")).at(line));
    }
    Ok(model)
}

struct Reader<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    line_start: usize,
    limits: ParseLimits,
    record_start: usize,
    record_line: usize,
}

impl Reader<'_> {
    fn column(&self) -> usize {
        self.src[self.line_start..self.pos.min(self.src.len())]
            .chars()
            .count()
            + 1
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, StepError> {
        Err(StepError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        if self.bytes[self.pos] == b'\n' {
            self.line += 1;
            self.line_start = self.pos + 1;
        }
        self.pos += 1;
    }

    fn begin_record(&mut self) {
        self.record_start = self.pos;
        self.record_line = self.line;
    }

    fn check_record_len(&self) -> Result<(), StepError> {
        if self.pos - self.record_start > self.limits.max_record_bytes {
            return Err(StepError::RecordTooLong {
                line: self.record_line,
                limit: self.limits.max_record_bytes,
            });
        }
        Ok(())
    }

    fn skip_trivia(&mut self) -> Result<(), StepError> {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.bump();
            } else if b == b'/' && self.bytes.get(self.pos + 1) == Some(&b'*') {
                let (line, column) = (self.line, self.column());
                self.bump();
                self.bump();
                loop {
                    match self.peek() {
                        None => {
                            return Err(StepError::Syntax {
                                line,
                                column,
                                message: "unterminated comment".into(),
                            })
                        }
                        Some(b'*') if self.bytes.get(self.pos + 1) == Some(&b'/') => {
                            self.bump();
                            self.bump();
                            break;
                        }
                        Some(_) => self.bump(),
                    }
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    fn expect_byte(&mut self, b: u8) -> Result<(), StepError> {
        self.skip_trivia()?;
        if self.peek() == Some(b) {
            self.bump();
            Ok(())
        } else {
            let found = self.src[self.pos..]
                .chars()
                .next()
                .map_or("end of input".to_string(), |c| format!("'{c}'"));
            self.syntax(format!("expected '{}', found {found}", b as char))
        }
    }

    fn is_word_byte(b: u8) -> bool {
        b.is_ascii_alphanumeric() || b == b'_' || b == b'-' || b == b'!'
    }

    fn peek_word_is(&self, w: &str) -> bool {
        let end = self.pos + w.len();
        self.bytes.len() >= end
            && self.src[self.pos..end].eq_ignore_ascii_case(w)
            && !self.bytes.get(end).is_some_and(|&b| Self::is_word_byte(b))
    }

    fn word(&mut self) -> Result<String, StepError> {
        self.skip_trivia()?;
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() || b == b'!' || b == b'_' => {}
            _ => return self.syntax("expected keyword"),
        }
        while self.peek().is_some_and(Self::is_word_byte) {
            self.bump();
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn expect_word(&mut self, w: &str) -> Result<(), StepError> {
        self.skip_trivia()?;
        if self.peek_word_is(w) {
            self.word()?;
            Ok(())
        } else {
            self.syntax(format!("expected {w}"))
        }
    }

    fn unsigned(&mut self) -> Result<u64, StepError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return self.syntax("expected digits");
        }
        self.src[start..self.pos]
            .parse()
            .or_else(|_| self.syntax("instance id out of range"))
    }

    /// One `#id=...;` record. `None` for complex (multi-leaf) instances,
    /// which are skipped.
    fn record(&mut self) -> Result<Option<StepInstance>, StepError> {
        self.skip_trivia()?;
        self.begin_record();
        let line = self.line;
        if self.peek() != Some(b'#') {
            return self.syntax("expected instance '#id='");
        }
        self.bump();
        let id = self.unsigned()?;
        self.expect_byte(b'=')?;
        self.skip_trivia()?;
        if self.peek() == Some(b'(') {
            self.bump();
            let mut depth = 1usize;
            while depth > 0 {
                self.skip_trivia()?;
                match self.peek() {
                    None => return self.syntax("unterminated complex instance"),
                    Some(b'\'') => {
                        self.string()?;
                    }
                    Some(b'(') => {
                        depth += 1;
                        self.bump();
                    }
                    Some(b')') => {
                        depth -= 1;
                        self.bump();
                    }
                    Some(_) => self.bump(),
                }
                self.check_record_len()?;
            }
            self.expect_byte(b';')?;
            return Ok(None);
        }
        let keyword = self.word()?;
        self.expect_byte(b'(')?;
        let params = self.params_until_close(1)?;
        self.expect_byte(b';')?;
        Ok(Some(StepInstance {
            id,
            keyword,
            params,
            line,
        }))
    }

    /// Parameters after an opening parenthesis, consuming the closing one.
    fn params_until_close(&mut self, depth: usize) -> Result<Vec<StepParam>, StepError> {
        if depth > self.limits.max_depth {
            return Err(StepError::TooDeep {
                line: self.line,
                column: self.column(),
                limit: self.limits.max_depth,
            });
        }
        let mut out = Vec::new();
        self.skip_trivia()?;
        if self.peek() == Some(b')') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.param(depth)?);
            self.check_record_len()?;
            self.skip_trivia()?;
            match self.peek() {
                Some(b',') => self.bump(),
                Some(b')') => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.syntax("expected ',' or ')' in parameter list"),
            }
        }
    }

    fn param(&mut self, depth: usize) -> Result<StepParam, StepError> {
        self.skip_trivia()?;
        let Some(b) = self.peek() else {
            return self.syntax("unexpected end of input in parameter list");
        };
        match b {
            b'$' => {
                self.bump();
                Ok(StepParam::Unset)
            }
            b'*' => {
                self.bump();
                Ok(StepParam::Derived)
            }
            b'#' => {
                self.bump();
                Ok(StepParam::Reference(self.unsigned()?))
            }
            b'\'' => Ok(StepParam::String(self.string()?)),
            b'"' => {
                self.bump();
                let start = self.pos;
                while self.peek().is_some_and(|b| b.is_ascii_hexdigit()) {
                    self.bump();
                }
                let hex = self.src[start..self.pos].to_string();
                if self.peek() != Some(b'"') {
                    return self.syntax("unterminated binary literal");
                }
                self.bump();
                Ok(StepParam::Binary(hex))
            }
            b'.' if self
                .bytes
                .get(self.pos + 1)
                .is_some_and(|b| b.is_ascii_alphabetic() || *b == b'_') =>
            {
                self.bump();
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    self.bump();
                }
                let name = self.src[start..self.pos].to_string();
                if self.peek() != Some(b'.') {
                    return self.syntax("unterminated enumeration value");
                }
                self.bump();
                Ok(StepParam::Enum(name))
            }
            b'(' => {
                self.bump();
                Ok(StepParam::List(self.params_until_close(depth + 1)?))
            }
            b'+' | b'-' | b'.' | b'0'..=b'9' => self.number(),
            b if b.is_ascii_alphabetic() || b == b'!' => {
                let kw = self.word()?;
                self.expect_byte(b'(')?;
                if depth + 1 > self.limits.max_depth {
                    return Err(StepError::TooDeep {
                        line: self.line,
                        column: self.column(),
                        limit: self.limits.max_depth,
                    });
                }
                let inner = self.param(depth + 1)?;
                self.expect_byte(b')')?;
                Ok(StepParam::Typed(kw, Box::new(inner)))
            }
            _ => self.syntax(format!(
                "unexpected character '{}' in parameter list",
                self.src[self.pos..].chars().next().unwrap_or('?')
            )),
        }
    }

    fn number(&mut self) -> Result<StepParam, StepError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.bump();
        }
        let mut real = false;
        while let Some(b) = self.peek() {
            match b {
                b'0'..=b'9' => self.bump(),
                b'.' => {
                    real = true;
                    self.bump();
                }
                b'E' | b'e' => {
                    real = true;
                    self.bump();
                    if matches!(self.peek(), Some(b'+' | b'-')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let lexical = &self.src[start..self.pos];
        if real {
            // Rust rejects "1.E5" but accepts "1.0E5"
            let normal = lexical.replace(".E", ".0E").replace(".e", ".0e");
            match normal.parse::<f64>() {
                Ok(value) if value.is_finite() => Ok(StepParam::Real {
                    value,
                    lexical: lexical.to_string(),
                }),
                _ => self.syntax(format!("malformed real {lexical}")),
            }
        } else {
            match lexical.parse::<i64>() {
                Ok(n) => Ok(StepParam::Integer(n)),
                Err(_) => self.syntax(format!("malformed integer {lexical}")),
            }
        }
    }

    fn string(&mut self) -> Result<String, StepError> {
        let (line, column) = (self.line, self.column());
        self.bump();
        let start = self.pos;
        loop {
            match self.peek() {
                None => return Err(StepError::UnterminatedString { line, column }),
                Some(b'\'') => {
                    if self.bytes.get(self.pos + 1) == Some(&b'\'') {
                        self.bump();
                        self.bump();
                    } else {
                        break;
                    }
                }
                Some(_) => self.bump(),
            }
            if self.pos - start > self.limits.max_record_bytes {
                return Err(StepError::RecordTooLong {
                    line,
                    limit: self.limits.max_record_bytes,
                });
            }
        }
        let raw = &self.src[start..self.pos];
        self.bump();
        decode_string(raw).map_err(|e| match e {
            StepError::BadEscape(esc) => StepError::Syntax {
                line,
                column,
                message: format!("malformed string escape {esc}"),
            },
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wrap(data: &str) -> String {
        format!(
            "ISO-10303-21;\nHEADER;\nFILE_DESCRIPTION(('ViewDefinition'),'2;1');\nFILE_SCHEMA(('IFC2X3'));\nENDSEC;\nDATA;\n{data}\nENDSEC;\nEND-ISO-10303-21;\n"
        )
    }

    #[test]
    fn multiline_wall_record() {
        let m = parse_spf(&wrap(
            "#2937=IFCPROPERTYSINGLEVALUE('Largeur', $, IFCLENGTHMEASURE(0.32), $);",
        ))
        .unwrap();
        assert_eq!(m.file_schema, vec!["IFC2X3"]);
        let i = m.get(2937).unwrap();
        assert_eq!(i.keyword, "IFCPROPERTYSINGLEVALUE");
        assert_eq!(
            i.params,
            vec![
                StepParam::String("Largeur".into()),
                StepParam::Unset,
                StepParam::Typed(
                    "IFCLENGTHMEASURE".into(),
                    Box::new(StepParam::Real {
                        value: 0.32,
                        lexical: "0.32".into()
                    })
                ),
                StepParam::Unset,
            ]
        );
        assert_eq!(m.dangling_references(), vec![]);
    }

    #[test]
    fn empty_data() {
        let m = parse_spf(&wrap("")).unwrap();
        assert!(m.is_empty());
        assert_eq!(m.header.len(), 2);
    }

    #[test]
    fn comments_multiline_and_dangling() {
        let m = parse_spf(&wrap(
            "/* a comment */ #1=IFCX(#2,\n  (#3, .AXIS2.), -1.E-3, 7, *,\n \"0AF\");\n#2=IFCY();",
        ))
        .unwrap();
        let p = &m.get(1).unwrap().params;
        assert_eq!(
            p[1],
            StepParam::List(vec![
                StepParam::Reference(3),
                StepParam::Enum("AXIS2".into())
            ])
        );
        assert!(matches!(&p[2], StepParam::Real { value, .. } if (*value + 0.001).abs() < 1e-12));
        assert_eq!(p[3], StepParam::Integer(7));
        assert_eq!(p[4], StepParam::Derived);
        assert_eq!(p[5], StepParam::Binary("0AF".into()));
        assert_eq!(m.dangling_references(), vec![(1, 3)]);
        assert_eq!(m.warnings.len(), 1);
    }

    #[test]
    fn fatal_errors() {
        let dup = parse_spf(&wrap("#1=A();\n#1=B();")).unwrap_err();
        assert_eq!(dup, StepError::DuplicateId { id: 1, line: 8 });
        let unterminated = parse_spf(&wrap("#1=A('abc);")).unwrap_err();
        assert!(matches!(
            unterminated,
            StepError::UnterminatedString { line: 7, column: 6 }
        ));
        let deep = format!("#1=A({}1{});", "(".repeat(70), ")".repeat(70));
        assert!(matches!(
            parse_spf(&wrap(&deep)).unwrap_err(),
            StepError::TooDeep { .. }
        ));
        let typed_deep = format!("#1=A({}1{});", "T(".repeat(70), ")".repeat(70));
        assert!(matches!(
            parse_spf(&wrap(&typed_deep)).unwrap_err(),
            StepError::TooDeep { .. }
        ));
        let ok = format!("#1=A({}1{});", "(".repeat(60), ")".repeat(60));
        assert!(parse_spf(&wrap(&ok)).is_ok());
    }

    #[test]
    fn record_length_cap() {
        let limits = ParseLimits {
            max_depth: 64,
            max_record_bytes: 64,
        };
        let long = format!("#1=A('{}');", "x".repeat(200));
        assert!(matches!(
            parse_spf_with(&wrap(&long), limits).unwrap_err(),
            StepError::RecordTooLong { .. }
        ));
    }

    #[test]
    fn rewrite_fixpoint() {
        let src = wrap("#1=IFCX('d\\X\\E9faut',1.E5,0.,(#1,$),.T.,IFCBOOLEAN(.F.));");
        let m = parse_spf(&src).unwrap();
        let again = parse_spf(&m.to_spf()).unwrap();
        assert_eq!(m.instances, again.instances);
        assert_eq!(m.header, again.header);
    }

    #[test]
    fn complex_instance_skipped() {
        let m = parse_spf(&wrap("#1=(A()B((1,2)));\n#2=C();")).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.warnings[0].message.contains("complex"));
    }
}
