//! Seeded generators and reference implementations shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ifcwod::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};
use ifcwod::sparql::{CompareOp, Filter, PatternTerm, Query, TriplePattern};
use ifcwod::step::{StepInstance, StepModel, StepParam};
use ifcwod::vocab::xsd;
use rand::seq::IndexedRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const AWKWARD: &[char] = &[
    'a', 'b', 'z', 'Z', '0', '9', ' ', '"', '\'', '\\', '\n', '\r', '\t', '#', '<', '>', '.', ';',
    ',', 'é', 'ß', '参', '照', '😀', '\u{7f}', '\u{1}', '_', '-', ':', '/',
];

pub fn awkward_string(r: &mut impl Rng, max: usize) -> String {
    let n = r.random_range(0..=max);
    (0..n).map(|_| *AWKWARD.choose(r).unwrap()).collect()
}

fn random_iri(r: &mut impl Rng) -> Iri {
    let bases = [
        "http://example.org/a#",
        "http://example.org/b/",
        "https://w3id.org/ifc/IFC4_ADD1#",
        "urn:x:",
        "http://example.org/é/",
    ];
    let locals = [
        "x",
        "Wall_1",
        "has.dot",
        "p-1",
        "_u",
        "",
        "caf\u{e9}",
        "9lead",
        "end.",
    ];
    Iri::new(format!(
        "{}{}{}",
        bases.choose(r).unwrap(),
        locals.choose(r).unwrap(),
        r.random_range(0..6)
    ))
    .unwrap()
}

fn random_literal(r: &mut impl Rng) -> Literal {
    match r.random_range(0..7) {
        0 => Literal::simple(awkward_string(r, 12)),
        1 => Literal::string(awkward_string(r, 12)),
        2 => Literal::lang(
            awkward_string(r, 8),
            *["en", "fr-CA", "ja-JP", "x-a1"].choose(r).unwrap(),
        )
        .unwrap(),
        3 => Literal::typed(r.random_range(-1000i64..1000).to_string(), xsd::integer()),
        4 => Literal::typed(
            format!("{}.{}", r.random_range(-99i32..99), r.random_range(0..100)),
            xsd::decimal(),
        ),
        5 => Literal::typed(*["true", "false"].choose(r).unwrap(), xsd::boolean()),
        _ => Literal::typed(awkward_string(r, 6), random_iri(r)),
    }
}

fn random_node(r: &mut impl Rng, blanks: u32) -> Term {
    if blanks > 0 && r.random_bool(0.3) {
        Term::Blank(BlankNode::new(format!("b{}", r.random_range(0..blanks))).unwrap())
    } else {
        Term::Iri(random_iri(r))
    }
}

/// A graph with awkward IRIs, literals of every shape and some blank nodes.
pub fn random_graph(r: &mut impl Rng, max_triples: usize) -> Graph {
    let mut g = Graph::new();
    g.register_prefix("ex", "http://example.org/a#").unwrap();
    g.register_prefix("ifcowl", "https://w3id.org/ifc/IFC4_ADD1#")
        .unwrap();
    let blanks = r.random_range(0..5);
    for _ in 0..r.random_range(0..=max_triples) {
        let s = random_node(r, blanks);
        let p = random_iri(r);
        let o = if r.random_bool(0.5) {
            Term::Literal(random_literal(r))
        } else {
            random_node(r, blanks)
        };
        g.insert(Triple::new(s, Term::Iri(p), o).unwrap());
    }
    g
}

fn random_param(r: &mut impl Rng, ids: &[u64], depth: usize) -> StepParam {
    let pick = if depth > 2 {
        r.random_range(0..8)
    } else {
        r.random_range(0..10)
    };
    match pick {
        0 => StepParam::Unset,
        1 => StepParam::Derived,
        2 => StepParam::Integer(r.random_range(-100_000..100_000)),
        3 => {
            let v: f64 = r.random_range(-1e6..1e6);
            StepParam::real(if r.random_bool(0.3) { v.round() } else { v })
        }
        4 => StepParam::String(awkward_string(r, 10)),
        5 => StepParam::Enum(
            ["T", "F", "AXIS2", "NOTDEFINED", "U"]
                .choose(r)
                .unwrap()
                .to_string(),
        ),
        6 | 7 => match ids.choose(r) {
            Some(id) => StepParam::Reference(*id),
            None => StepParam::Unset,
        },
        8 => StepParam::Typed(
            ["IFCLABEL", "IFCLENGTHMEASURE", "IFCBOOLEAN"]
                .choose(r)
                .unwrap()
                .to_string(),
            Box::new(random_param(r, ids, depth + 1)),
        ),
        _ => StepParam::List(
            (0..r.random_range(0..4))
                .map(|_| random_param(r, ids, depth + 1))
                .collect(),
        ),
    }
}

pub fn random_model(r: &mut impl Rng, max_instances: usize) -> StepModel {
    let n = r.random_range(1..=max_instances);
    let ids: Vec<u64> = (0..n)
        .map(|i| 1 + i as u64 * r.random_range(1..4))
        .collect();
    let mut m = StepModel {
        file_schema: vec!["IFC4".into()],
        ..StepModel::default()
    };
    for &id in &ids {
        let keyword = ["IFCWALL", "IFCPROPERTYSET", "IFCCARTESIANPOINT", "IFCX_Y"]
            .choose(r)
            .unwrap()
            .to_string();
        let params = (0..r.random_range(0..6))
            .map(|_| random_param(r, &ids, 0))
            .collect();
        m.insert(StepInstance {
            id,
            keyword,
            params,
            line: 0,
        });
    }
    m
}

/// Small closed vocabulary so that random patterns actually join.
pub struct Vocab {
    pub nodes: Vec<Term>,
    pub predicates: Vec<Term>,
    pub literals: Vec<Term>,
}

impl Vocab {
    pub fn new(nodes: usize) -> Vocab {
        Vocab {
            nodes: (0..nodes)
                .map(|i| Term::iri(&format!("http://example.org/n{i}")).unwrap())
                .collect(),
            predicates: (0..4)
                .map(|i| Term::iri(&format!("http://example.org/p{i}")).unwrap())
                .collect(),
            literals: (0..6)
                .map(|i| Term::Literal(Literal::typed(i.to_string(), xsd::integer())))
                .collect(),
        }
    }

    pub fn triple(&self, r: &mut impl Rng) -> Triple {
        let s = self.nodes.choose(r).unwrap().clone();
        let p = self.predicates.choose(r).unwrap().clone();
        let o = if r.random_bool(0.2) {
            self.literals.choose(r).unwrap().clone()
        } else {
            self.nodes.choose(r).unwrap().clone()
        };
        Triple::new(s, p, o).unwrap()
    }

    pub fn graph(&self, r: &mut impl Rng, n: usize) -> Graph {
        let mut g = Graph::new();
        for _ in 0..n {
            g.insert(self.triple(r));
        }
        g
    }

    fn any_term(&self, r: &mut impl Rng) -> Term {
        match r.random_range(0..10) {
            0 => Term::iri("http://example.org/absent").unwrap(),
            1 | 2 => self.literals.choose(r).unwrap().clone(),
            _ => self.nodes.choose(r).unwrap().clone(),
        }
    }

    pub fn query(&self, r: &mut impl Rng) -> Query {
        let vars = ["a", "b", "c", "d"];
        let slot = |r: &mut ChaCha8Rng, pos: usize| {
            if r.random_bool(if pos == 1 { 0.2 } else { 0.6 }) {
                PatternTerm::Var(vars.choose(r).unwrap().to_string())
            } else if pos == 1 {
                PatternTerm::Const(self.predicates.choose(r).unwrap().clone())
            } else {
                PatternTerm::Const(self.any_term(r))
            }
        };
        let mut local = ChaCha8Rng::seed_from_u64(r.random());
        let mut patterns = Vec::new();
        loop {
            patterns.clear();
            for _ in 0..local.random_range(1..=4) {
                patterns.push(TriplePattern {
                    subject: slot(&mut local, 0),
                    predicate: slot(&mut local, 1),
                    object: slot(&mut local, 2),
                });
            }
            if patterns
                .iter()
                .any(|p| p.terms().iter().any(|t| t.var().is_some()))
            {
                break;
            }
        }
        let mut q = Query {
            prefixes: BTreeMap::new(),
            projection: Vec::new(),
            distinct: local.random_bool(0.3),
            patterns,
            filters: Vec::new(),
        };
        let all = q.variables();
        q.projection = all
            .iter()
            .filter(|_| local.random_bool(0.6))
            .cloned()
            .collect();
        if q.projection.is_empty() {
            q.projection = vec![all[0].clone()];
        }
        if local.random_bool(0.3) {
            let ops = [
                CompareOp::Eq,
                CompareOp::Ne,
                CompareOp::Lt,
                CompareOp::Le,
                CompareOp::Gt,
                CompareOp::Ge,
            ];
            q.filters.push(Filter {
                var: all.choose(&mut local).unwrap().clone(),
                op: *ops.choose(&mut local).unwrap(),
                value: if local.random_bool(0.7) {
                    self.literals.choose(&mut local).unwrap().clone()
                } else {
                    self.nodes.choose(&mut local).unwrap().clone()
                },
            });
        }
        q
    }
}

/// Nested-loop evaluation straight over the graph, patterns in written order.
pub fn nested_loop(graph: &Graph, q: &Query) -> Vec<Vec<Term>> {
    let mut rows: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for p in &q.patterns {
        let mut next = Vec::new();
        for row in &rows {
            'triples: for t in graph.iter() {
                let mut b = row.clone();
                let parts = [
                    t.subject().clone(),
                    Term::Iri(t.predicate().clone()),
                    t.object().clone(),
                ];
                for (pt, val) in p.terms().into_iter().zip(parts) {
                    match pt {
                        PatternTerm::Const(c) => {
                            if *c != val {
                                continue 'triples;
                            }
                        }
                        PatternTerm::Var(v) => match b.get(v) {
                            Some(bound) if *bound != val => continue 'triples,
                            Some(_) => {}
                            None => {
                                b.insert(v.clone(), val);
                            }
                        },
                    }
                }
                next.push(b);
            }
        }
        rows = next;
    }
    let mut out: Vec<Vec<Term>> = rows
        .into_iter()
        .filter(|b| q.filters.iter().all(|f| f.accepts(&b[&f.var])))
        .map(|b| q.projection.iter().map(|v| b[v].clone()).collect())
        .collect();
    if q.distinct {
        let set: BTreeSet<_> = out.into_iter().collect();
        out = set.into_iter().collect();
    }
    out.sort();
    out
}

/// Reflexive-free transitive closure by Warshall's algorithm.
pub fn warshall(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in edges {
        m[a][b] = true;
    }
    for k in 0..n {
        let via = m[k].clone();
        for row in m.iter_mut() {
            if row[k] {
                for (cell, &reach) in row.iter_mut().zip(&via) {
                    *cell |= reach;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Random DAG over `n` nodes: edges only go from lower to higher index.
pub fn random_dag(r: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let density = r.random_range(0.005..0.05);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.random_bool(density) {
                edges.push((i, j));
            }
        }
    }
    edges
}
