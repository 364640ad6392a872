//! A SPARQL subset: `PREFIX`, `SELECT [DISTINCT]`, one basic graph pattern
//! and `FILTER (?v op constant)` comparisons.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::rdf::{Iri, Literal, Term};
use crate::store::{Id, IdPattern, Store};
use crate::vocab::{rdf, xsd};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported feature: {0}")]
    Unsupported(String),
    #[error("empty graph pattern")]
    EmptyPattern,
    #[error("undeclared prefix {0:?}")]
    UnknownPrefix(String),
    #[error("projected variable ?{0} does not occur in any pattern")]
    UnboundProjection(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn terms(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    fn flip(self) -> Self {
        match self {
            CompareOp::Lt => CompareOp::Gt,
            CompareOp::Le => CompareOp::Ge,
            CompareOp::Gt => CompareOp::Lt,
            CompareOp::Ge => CompareOp::Le,
            other => other,
        }
    }

    fn holds(self, ord: Ordering) -> bool {
        match self {
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Ne => ord != Ordering::Equal,
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Le => ord != Ordering::Greater,
            CompareOp::Gt => ord == Ordering::Greater,
            CompareOp::Ge => ord != Ordering::Less,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Filter {
    pub var: String,
    pub op: CompareOp,
    pub value: Term,
}

impl Filter {
    /// Numbers compare by value, everything else by term equality, and
    /// plain strings also order lexically.
    pub fn accepts(&self, term: &Term) -> bool {
        let (Term::Literal(a), Term::Literal(b)) = (term, &self.value) else {
            return match self.op {
                CompareOp::Eq => term == &self.value,
                CompareOp::Ne => term != &self.value,
                _ => false,
            };
        };
        if let (Some(x), Some(y)) = (a.as_f64(), b.as_f64()) {
            return x.partial_cmp(&y).is_some_and(|o| self.op.holds(o));
        }
        let stringy = |l: &Literal| {
            l.language().is_none() && l.datatype().is_none_or(|d| *d == xsd::string())
        };
        match self.op {
            CompareOp::Eq => a == b,
            CompareOp::Ne => a != b,
            op if stringy(a) && stringy(b) => op.holds(a.lexical().cmp(b.lexical())),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Query {
    pub prefixes: BTreeMap<String, String>,
    pub projection: Vec<String>,
    pub distinct: bool,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Filter>,
}

impl Query {
    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.patterns {
            for v in p.terms().into_iter().filter_map(PatternTerm::var) {
                if !out.iter().any(|o| o == v) {
                    out.push(v.to_string());
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Iri(String),
    PName(String, String),
    Var(String),
    Str(String),
    Num(String),
    Word(String),
    Punct(&'static str),
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, QueryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, m: String| QueryError::Syntax {
        line,
        column,
        message: m,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let step = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            step(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let push = |tok, out: &mut Vec<Lexed>| {
            out.push(Lexed {
                tok,
                line: l0,
                column: c0,
            })
        };
        match c {
            '<' => {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&ch| ch == '>' || ch.is_whitespace() || ch == '<');
                match end {
                    Some(n)
                        if chars[i + 1 + n] == '>' && n > 0 && chars.get(i + 1) != Some(&'=') =>
                    {
                        push(Tok::Iri(chars[i + 1..i + 1 + n].iter().collect()), &mut out);
                        step(n + 2, &mut i, &mut col);
                    }
                    _ if chars.get(i + 1) == Some(&'=') => {
                        push(Tok::Punct("<="), &mut out);
                        step(2, &mut i, &mut col);
                    }
                    _ => {
                        push(Tok::Punct("<"), &mut out);
                        step(1, &mut i, &mut col);
                    }
                }
            }
            '>' | '!' | '=' => {
                let two = chars.get(i + 1) == Some(&'=');
                let p = match (c, two) {
                    ('>', true) => ">=",
                    ('>', false) => ">",
                    ('!', true) => "!=",
                    ('=', _) => "=",
                    _ => return Err(err(l0, c0, "unexpected '!'".into())),
                };
                push(Tok::Punct(p), &mut out);
                step(if two && c != '=' { 2 } else { 1 }, &mut i, &mut col);
            }
            '?' | '$' => {
                let n = chars[i + 1..]
                    .iter()
                    .take_while(|ch| ch.is_alphanumeric() || **ch == '_')
                    .count();
                if n == 0 {
                    return Err(err(l0, c0, "empty variable name".into()));
                }
                push(Tok::Var(chars[i + 1..i + 1 + n].iter().collect()), &mut out);
                step(n + 1, &mut i, &mut col);
            }
            '"' | '\'' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => return Err(err(l0, c0, "unterminated string".into())),
                        Some(&q) if q == c => break,
                        Some('\\') => {
                            let e = chars.get(j + 1).copied().unwrap_or(' ');
                            s.push(match e {
                                'n' => '\n',
                                't' => '\t',
                                'r' => '\r',
                                other => other,
                            });
                            j += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            j += 1;
                        }
                    }
                }
                push(Tok::Str(s), &mut out);
                step(j + 1 - i, &mut i, &mut col);
            }
            '{' | '}' | '(' | ')' | '.' | ';' | ',' | '*' | '@' | '/' | '|' | '^' | '+' => {
                if c == '^' && chars.get(i + 1) == Some(&'^') {
                    push(Tok::Punct("^^"), &mut out);
                    step(2, &mut i, &mut col);
                    continue;
                }
                if (c == '.' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    let n = number_len(&chars[i..]);
                    push(Tok::Num(chars[i..i + n].iter().collect()), &mut out);
                    step(n, &mut i, &mut col);
                    continue;
                }
                let p = match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    '.' => ".",
                    ';' => ";",
                    ',' => ",",
                    '*' => "*",
                    '@' => "@",
                    '/' => "/",
                    '|' => "|",
                    '^' => "^",
                    _ => "+",
                };
                push(Tok::Punct(p), &mut out);
                step(1, &mut i, &mut col);
            }
            '-' | '0'..='9' => {
                let n = number_len(&chars[i..]);
                if n == 0 || (n == 1 && c == '-') {
                    return Err(err(l0, c0, format!("unexpected {c:?}")));
                }
                push(Tok::Num(chars[i..i + n].iter().collect()), &mut out);
                step(n, &mut i, &mut col);
            }
            c if c.is_alphabetic() || c == '_' || c == ':' => {
                let n = chars[i..]
                    .iter()
                    .take_while(|ch| {
                        ch.is_alphanumeric() || matches!(ch, '_' | '-' | ':' | '.' | '%')
                    })
                    .count();
                let mut word: String = chars[i..i + n].iter().collect();
                // A trailing dot ends the triple, it is not part of the name.
                while word.ends_with('.') {
                    word.pop();
                }
                let len = word.chars().count();
                let tok = match word.split_once(':') {
                    Some((p, l)) => Tok::PName(p.to_string(), l.to_string()),
                    None => Tok::Word(word),
                };
                push(tok, &mut out);
                step(len, &mut i, &mut col);
            }
            other => return Err(err(l0, c0, format!("unexpected {other:?}"))),
        }
    }
    Ok(out)
}

fn number_len(chars: &[char]) -> usize {
    let mut n = 0;
    if matches!(chars.first(), Some('-' | '+')) {
        n = 1;
    }
    n += chars[n..].iter().take_while(|c| c.is_ascii_digit()).count();
    if chars.get(n) == Some(&'.') && chars.get(n + 1).is_some_and(|c| c.is_ascii_digit()) {
        n += 1;
        n += chars[n..].iter().take_while(|c| c.is_ascii_digit()).count();
    }
    if matches!(chars.get(n), Some('e' | 'E')) {
        let mut m = n + 1;
        if matches!(chars.get(m), Some('-' | '+')) {
            m += 1;
        }
        let d = chars[m..].iter().take_while(|c| c.is_ascii_digit()).count();
        if d > 0 {
            n = m + d;
        }
    }
    n
}

const UNSUPPORTED: [&str; 18] = [
    "OPTIONAL",
    "UNION",
    "MINUS",
    "GRAPH",
    "SERVICE",
    "BIND",
    "VALUES",
    "GROUP",
    "ORDER",
    "LIMIT",
    "OFFSET",
    "HAVING",
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "FROM",
    "EXISTS",
    "NOT",
];

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or((1, 1), |l| (l.line, l.column));
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<Tok, QueryError> {
        let t = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error("unexpected end of query"))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{p}'")))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x.eq_ignore_ascii_case(w))
    }

    fn check_unsupported(&self) -> Result<(), QueryError> {
        if let Some(Tok::Word(w)) = self.peek() {
            let up = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&up.as_str()) {
                return Err(QueryError::Unsupported(up));
            }
        }
        if let Some(Tok::Punct(p @ ("/" | "|" | "^" | "*" | "+"))) = self.peek() {
            return Err(QueryError::Unsupported(format!(
                "property path operator '{p}'"
            )));
        }
        Ok(())
    }

    fn iri(&self, s: &str) -> Result<Iri, QueryError> {
        Iri::new(s).map_err(|e| self.error(e.to_string()))
    }

    fn expand(&self, prefix: &str, local: &str) -> Result<Iri, QueryError> {
        let ns = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| QueryError::UnknownPrefix(prefix.to_string()))?;
        self.iri(&format!("{ns}{local}"))
    }

    fn term(&mut self, position: usize) -> Result<PatternTerm, QueryError> {
        self.check_unsupported()?;
        let tok = self.next()?;
        let term: Term = match tok {
            Tok::Var(v) => return Ok(PatternTerm::Var(v)),
            Tok::Iri(s) => self.iri(&s)?.into(),
            Tok::PName(p, l) => self.expand(&p, &l)?.into(),
            Tok::Word(w) if w == "a" && position == 1 => rdf::type_().into(),
            Tok::Word(w) if w == "true" || w == "false" => Literal::typed(w, xsd::boolean()).into(),
            Tok::Num(n) => numeric(&n).into(),
            Tok::Str(s) => {
                if self.eat("@") {
                    match self.next()? {
                        Tok::Word(tag) => Literal::lang(s, tag)
                            .map_err(|e| self.error(e.to_string()))?
                            .into(),
                        _ => return Err(self.error("expected a language tag")),
                    }
                } else if self.eat("^^") {
                    let dt = match self.next()? {
                        Tok::Iri(i) => self.iri(&i)?,
                        Tok::PName(p, l) => self.expand(&p, &l)?,
                        _ => return Err(self.error("expected a datatype IRI")),
                    };
                    Literal::typed(s, dt).into()
                } else {
                    Literal::string(s).into()
                }
            }
            other => {
                self.pos -= 1;
                return Err(self.error(format!("unexpected {other:?}")));
            }
        };
        if position != 2 && matches!(term, Term::Literal(_)) {
            return Err(self.error("literal outside the object position"));
        }
        self.check_unsupported()?;
        Ok(PatternTerm::Const(term))
    }

    fn filter(&mut self) -> Result<Filter, QueryError> {
        self.expect("(")?;
        let lhs = self.operand()?;
        let op = match self.next()? {
            Tok::Punct("=") => CompareOp::Eq,
            Tok::Punct("!=") => CompareOp::Ne,
            Tok::Punct("<") => CompareOp::Lt,
            Tok::Punct("<=") => CompareOp::Le,
            Tok::Punct(">") => CompareOp::Gt,
            Tok::Punct(">=") => CompareOp::Ge,
            _ => {
                self.pos -= 1;
                return Err(QueryError::Unsupported(
                    "filter expression other than ?var op constant".into(),
                ));
            }
        };
        let rhs = self.operand()?;
        self.expect(")")?;
        match (lhs, rhs) {
            (PatternTerm::Var(var), PatternTerm::Const(value)) => Ok(Filter { var, op, value }),
            (PatternTerm::Const(value), PatternTerm::Var(var)) => Ok(Filter {
                var,
                op: op.flip(),
                value,
            }),
            _ => Err(QueryError::Unsupported(
                "filter expression other than ?var op constant".into(),
            )),
        }
    }

    fn operand(&mut self) -> Result<PatternTerm, QueryError> {
        if let Some(Tok::Word(w)) = self.peek() {
            if w != "true" && w != "false" {
                return Err(QueryError::Unsupported(format!("filter function {w}")));
            }
        }
        self.term(2)
    }
}

fn numeric(lex: &str) -> Literal {
    let dt = if lex.contains(['e', 'E']) {
        xsd::double()
    } else if lex.contains('.') {
        xsd::decimal()
    } else {
        xsd::integer()
    };
    Literal::typed(lex.trim_start_matches('+'), dt)
}

pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        prefixes: BTreeMap::new(),
    };
    while p.is_word("PREFIX") {
        p.pos += 1;
        let name = match p.next()? {
            Tok::PName(name, local) if local.is_empty() => name,
            _ => return Err(p.error("expected 'name:' after PREFIX")),
        };
        let ns = match p.next()? {
            Tok::Iri(ns) => ns,
            _ => return Err(p.error("expected a namespace IRI")),
        };
        p.prefixes.insert(name, ns);
    }
    p.check_unsupported()?;
    if !p.is_word("SELECT") {
        return Err(p.error("expected SELECT"));
    }
    p.pos += 1;
    let distinct = p.is_word("DISTINCT");
    if distinct {
        p.pos += 1;
    }
    let mut projection = Vec::new();
    let star = p.eat("*");
    if !star {
        loop {
            match p.peek() {
                Some(Tok::Var(v)) => {
                    projection.push(v.clone());
                    p.pos += 1;
                }
                Some(Tok::Punct("(")) => {
                    return Err(QueryError::Unsupported("projection expression".into()))
                }
                _ => break,
            }
        }
    }
    if !star && projection.is_empty() {
        return Err(p.error("expected projected variables"));
    }
    p.check_unsupported()?;
    if p.is_word("WHERE") {
        p.pos += 1;
    }
    p.expect("{")?;
    let mut patterns = Vec::new();
    let mut filters = Vec::new();
    loop {
        p.check_unsupported()?;
        if p.eat("}") {
            break;
        }
        if p.eat(".") {
            continue;
        }
        if p.is_word("FILTER") {
            p.pos += 1;
            filters.push(p.filter()?);
            continue;
        }
        if matches!(p.peek(), Some(Tok::Punct("{"))) {
            return Err(QueryError::Unsupported("nested group".into()));
        }
        let subject = p.term(0)?;
        loop {
            let predicate = p.term(1)?;
            loop {
                let object = p.term(2)?;
                patterns.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if !p.eat(",") {
                    break;
                }
            }
            if !p.eat(";") {
                break;
            }
            if matches!(p.peek(), Some(Tok::Punct("." | "}"))) {
                break;
            }
        }
        match p.peek() {
            Some(Tok::Punct(".")) | Some(Tok::Punct("}")) => {}
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("FILTER") => {}
            _ => {
                p.check_unsupported()?;
                return Err(p.error("expected '.' or '}'"));
            }
        }
    }
    if p.pos < p.toks.len() {
        p.check_unsupported()?;
        return Err(p.error("trailing input after the graph pattern"));
    }
    if patterns.is_empty() {
        return Err(QueryError::EmptyPattern);
    }
    let mut q = Query {
        prefixes: p.prefixes,
        projection,
        distinct,
        patterns,
        filters,
    };
    let vars = q.variables();
    if star {
        q.projection = vars.clone();
    }
    for v in &q.projection {
        if !vars.contains(v) {
            return Err(QueryError::UnboundProjection(v.clone()));
        }
    }
    Ok(q)
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub variables: Vec<String>,
    pub solutions: Vec<Vec<Term>>,
    /// Rows produced by each join step, summed.
    pub intermediate_rows: usize,
    /// Pattern indices in the order they were joined.
    pub join_order: Vec<usize>,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

impl EvalReport {
    /// Solutions in sorted order, the canonical multiset form.
    pub fn sorted_solutions(&self) -> Vec<Vec<Term>> {
        let mut s = self.solutions.clone();
        s.sort();
        s
    }

    /// Tab-separated dump with a header row and sorted N-Triples terms.
    pub fn to_tsv(&self) -> String {
        let mut out = self
            .variables
            .iter()
            .map(|v| format!("?{v}"))
            .collect::<Vec<_>>()
            .join("\t");
        out.push('\n');
        let mut rows: Vec<String> = self
            .solutions
            .iter()
            .map(|r| r.iter().map(Term::to_string).collect::<Vec<_>>().join("\t"))
            .collect();
        rows.sort();
        for r in rows {
            out.push_str(&r);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tsv())
    }
}

const UNBOUND: Id = Id::MAX;

enum Slot {
    Var(usize),
    Const(Option<Id>),
}

/// Evaluate `query` against `store`. Read-only, so several queries may run
/// against one store in parallel.
pub fn evaluate(store: &Store, query: &Query) -> EvalReport {
    let started = Instant::now();
    let vars = query.variables();
    let slot_of = |v: &str| {
        vars.iter()
            .position(|x| x == v)
            .expect("variable collected")
    };
    let compiled: Vec<[Slot; 3]> = query
        .patterns
        .iter()
        .map(|p| {
            p.terms().map(|t| match t {
                PatternTerm::Var(v) => Slot::Var(slot_of(v)),
                PatternTerm::Const(c) => Slot::Const(store.id(c)),
            })
        })
        .collect();
    let mut warnings = Vec::new();
    let mut filters: Vec<(usize, &Filter)> = Vec::new();
    for f in &query.filters {
        match vars.iter().position(|x| *x == f.var) {
            Some(i) => filters.push((i, f)),
            None => warnings.push(format!(
                "filter variable ?{} is never bound, rows rejected",
                f.var
            )),
        }
    }
    let reject_all = filters.len() != query.filters.len();
    let has_missing_const = compiled
        .iter()
        .any(|p| p.iter().any(|s| matches!(s, Slot::Const(None))));

    let order = join_order(store, &compiled);
    let mut rows: Vec<Vec<Id>> = vec![vec![UNBOUND; vars.len()]];
    let mut bound = vec![false; vars.len()];
    let mut intermediate = 0;
    for &pi in &order {
        if has_missing_const || reject_all {
            rows.clear();
            break;
        }
        let pat = &compiled[pi];
        let mut next = Vec::new();
        for row in &rows {
            let key: IdPattern = [0, 1, 2].map(|k| match pat[k] {
                Slot::Const(c) => c,
                Slot::Var(v) => (row[v] != UNBOUND).then_some(row[v]),
            });
            'triples: for t in store.scan(key) {
                let mut r = row.clone();
                for k in 0..3 {
                    if let Slot::Var(v) = pat[k] {
                        if r[v] == UNBOUND {
                            r[v] = t[k];
                        } else if r[v] != t[k] {
                            continue 'triples;
                        }
                    }
                }
                next.push(r);
            }
        }
        for s in pat {
            if let Slot::Var(v) = s {
                bound[*v] = true;
            }
        }
        next.retain(|r| {
            filters
                .iter()
                .filter(|(v, _)| bound[*v])
                .all(|(v, f)| f.accepts(store.term(r[*v])))
        });
        intermediate += next.len();
        rows = next;
    }

    let proj: Vec<usize> = query.projection.iter().map(|v| slot_of(v)).collect();
    let mut solutions: Vec<Vec<Id>> = rows
        .into_iter()
        .map(|r| proj.iter().map(|&i| r[i]).collect())
        .collect();
    if query.distinct {
        let mut seen = BTreeSet::new();
        solutions.retain(|r| seen.insert(r.clone()));
    }
    EvalReport {
        variables: query.projection.clone(),
        solutions: solutions
            .into_iter()
            .map(|r| r.into_iter().map(|id| store.term(id).clone()).collect())
            .collect(),
        intermediate_rows: intermediate,
        join_order: order,
        wall_time: started.elapsed(),
        warnings,
    }
}

/// Greedy order: smallest exact count first, then among the patterns that
/// share a variable with what is already bound, the smallest count.
fn join_order(store: &Store, compiled: &[[Slot; 3]]) -> Vec<usize> {
    let counts: Vec<usize> = compiled
        .iter()
        .map(|p| {
            let key: IdPattern = [0, 1, 2].map(|k| match p[k] {
                Slot::Const(c) => Some(c.unwrap_or(UNBOUND)),
                Slot::Var(_) => None,
            });
            store.count(key)
        })
        .collect();
    let vars_of = |p: &[Slot; 3]| -> Vec<usize> {
        p.iter()
            .filter_map(|s| match s {
                Slot::Var(v) => Some(*v),
                Slot::Const(_) => None,
            })
            .collect()
    };
    let mut bound: BTreeSet<usize> = BTreeSet::new();
    let mut left: Vec<usize> = (0..compiled.len()).collect();
    let mut order = Vec::new();
    while !left.is_empty() {
        let connected: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| vars_of(&compiled[i]).iter().any(|v| bound.contains(v)))
            .collect();
        let pool = if connected.is_empty() {
            &left
        } else {
            &connected
        };
        let best = *pool
            .iter()
            .min_by_key(|&&i| (counts[i], i))
            .expect("non-empty");
        bound.extend(vars_of(&compiled[best]));
        order.push(best);
        left.retain(|&i| i != best);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Graph;

    const SEQUENCE_Q: &str = "PREFIX ifcowl: <https://w3id.org/ifc/IFC4_ADD1#>
        SELECT ?x ?z { ?x ifcowl:isPredecessorTo ?y. ?y ifcowl:RelatingProcess_of_IfcRelSequence ?z. }";
    const SEQUENCE_QW: &str = "PREFIX ifcwo: <http://buildingsmart.org/ontology/ifcwod#>
        SELECT ?x ?y {?x ifcwo:isPredecessorTo_IfcProcess ?y}";

    #[test]
    fn sequence_query_forms_parse() {
        let q = parse_query(SEQUENCE_Q).unwrap();
        assert_eq!(q.pattern_count(), 2);
        assert_eq!(q.projection, ["x", "z"]);
        assert_eq!(parse_query(SEQUENCE_QW).unwrap().pattern_count(), 1);
    }

    #[test]
    fn rejections() {
        assert_eq!(parse_query("SELECT ?x { }"), Err(QueryError::EmptyPattern));
        assert_eq!(
            parse_query("SELECT ?x { ?x <http://e/p> ?y OPTIONAL { ?x <http://e/q> ?z } }"),
            Err(QueryError::Unsupported("OPTIONAL".into()))
        );
        assert!(matches!(
            parse_query("SELECT ?x { ?x <http://e/p>/<http://e/q> ?y }"),
            Err(QueryError::Unsupported(_))
        ));
        assert!(matches!(
            parse_query("SELECT ?x { { ?x ?p ?o } UNION { ?x ?p ?o } }"),
            Err(QueryError::Unsupported(_))
        ));
        assert_eq!(
            parse_query("SELECT ?x { ?x e:p ?y }"),
            Err(QueryError::UnknownPrefix("e".into()))
        );
        assert_eq!(
            parse_query("SELECT ?q { ?x <http://e/p> ?y }"),
            Err(QueryError::UnboundProjection("q".into()))
        );
    }

    #[test]
    fn abbreviations_and_filters() {
        let q = parse_query(
            "PREFIX e: <http://e/> SELECT DISTINCT * WHERE { ?s a e:Space ; e:h ?h , ?g . FILTER(?h >= 2.5) FILTER (\"x\" = ?g) }",
        )
        .unwrap();
        assert_eq!(q.pattern_count(), 3);
        assert!(q.distinct);
        assert_eq!(q.projection, ["s", "h", "g"]);
        assert_eq!(q.filters[0].op, CompareOp::Ge);
        assert_eq!(q.filters[1].value, Literal::string("x").into());
        let q = parse_query("SELECT ?h { ?s <http://e/h> ?h FILTER(?h<3) }").unwrap();
        assert_eq!(q.filters[0].op, CompareOp::Lt);
    }

    fn walls(n: usize) -> Store {
        let mut g = Graph::new();
        for i in 0..n {
            let w = Iri::new(format!("http://e/w{i}")).unwrap();
            g.add(w.clone(), &rdf::type_(), Iri::new("http://e/Wall").unwrap());
            g.add(
                w,
                &Iri::new("http://e/h").unwrap(),
                Literal::typed(i.to_string(), xsd::integer()),
            );
        }
        Store::from_graph(&g)
    }

    #[test]
    fn single_pattern_rows() {
        let s = walls(3);
        let r = evaluate(
            &s,
            &parse_query("SELECT ?x { ?x a <http://e/Wall> }").unwrap(),
        );
        assert_eq!(r.solutions.len(), 3);
        assert_eq!(r.intermediate_rows, 3);
    }

    #[test]
    fn joins_and_filters() {
        let s = walls(5);
        let q = parse_query(
            "SELECT ?x ?h { ?x a <http://e/Wall> . ?x <http://e/h> ?h FILTER(?h > 2) }",
        )
        .unwrap();
        let r = evaluate(&s, &q);
        assert_eq!(r.solutions.len(), 2);
        assert!(r.intermediate_rows >= 2);
        assert_eq!(r.to_tsv().lines().count(), 3);
        let q = parse_query("SELECT ?x { ?x a <http://e/Door> }").unwrap();
        assert!(evaluate(&s, &q).solutions.is_empty());
        let q = parse_query("SELECT DISTINCT ?t { ?x a ?t }").unwrap();
        assert_eq!(evaluate(&s, &q).solutions.len(), 1);
    }
}
