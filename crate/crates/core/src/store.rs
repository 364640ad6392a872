//! Dictionary-encoded in-memory triple store with three sorted indices and
//! forward-chaining materialization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::rdf::{Graph, Iri, Term, Triple};
use crate::tbox::Characteristics;
use crate::vocab::{owl, rdf, rdfs};

pub type Id = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error(
        "closure exceeded the budget of {budget} triples ({size} reached), partial closure kept"
    )]
    BudgetExceeded { budget: usize, size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Order {
    Spo,
    Pos,
    Osp,
}

impl Order {
    fn permute(self, [s, p, o]: [Id; 3]) -> [Id; 3] {
        match self {
            Order::Spo => [s, p, o],
            Order::Pos => [p, o, s],
            Order::Osp => [o, s, p],
        }
    }

    fn unpermute(self, [a, b, c]: [Id; 3]) -> [Id; 3] {
        match self {
            Order::Spo => [a, b, c],
            Order::Pos => [c, a, b],
            Order::Osp => [b, c, a],
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Store {
    terms: Vec<Term>,
    ids: HashMap<Term, Id>,
    spo: Vec<[Id; 3]>,
    pos: Vec<[Id; 3]>,
    osp: Vec<[Id; 3]>,
}

/// A triple pattern over dictionary ids; `None` matches anything.
pub type IdPattern = [Option<Id>; 3];

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    pub fn from_graph(graph: &Graph) -> Self {
        let mut s = Store::new();
        s.load(graph);
        s
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn id(&self, term: &Term) -> Option<Id> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: Id) -> &Term {
        &self.terms[id as usize]
    }

    pub fn intern(&mut self, term: &Term) -> Id {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = Id::try_from(self.terms.len()).expect("dictionary overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    /// Load every triple of `graph`. Returns the number of new triples.
    pub fn load(&mut self, graph: &Graph) -> usize {
        let batch: Vec<[Id; 3]> = graph
            .iter()
            .map(|t| {
                [
                    self.intern(t.subject()),
                    self.intern(&Term::Iri(t.predicate().clone())),
                    self.intern(t.object()),
                ]
            })
            .collect();
        self.insert_ids(batch).len()
    }

    pub fn insert(&mut self, triple: &Triple) -> bool {
        let ids = [
            self.intern(triple.subject()),
            self.intern(&Term::Iri(triple.predicate().clone())),
            self.intern(triple.object()),
        ];
        !self.insert_ids(vec![ids]).is_empty()
    }

    /// Insert id triples, returning those that were not yet present.
    fn insert_ids(&mut self, mut batch: Vec<[Id; 3]>) -> Vec<[Id; 3]> {
        batch.sort_unstable();
        batch.dedup();
        batch.retain(|t| self.spo.binary_search(t).is_err());
        if batch.is_empty() {
            return batch;
        }
        for (order, index) in [
            (Order::Spo, &mut self.spo),
            (Order::Pos, &mut self.pos),
            (Order::Osp, &mut self.osp),
        ] {
            let mut add: Vec<[Id; 3]> = batch.iter().map(|t| order.permute(*t)).collect();
            add.sort_unstable();
            *index = merge(std::mem::take(index), add);
        }
        batch
    }

    fn pick(&self, pattern: IdPattern) -> (Order, Vec<Id>) {
        let [s, p, o] = pattern;
        let (order, key): (Order, Vec<Option<Id>>) = match (s.is_some(), p.is_some(), o.is_some()) {
            (_, true, true) if s.is_none() => (Order::Pos, vec![p, o]),
            (true, _, true) if p.is_none() => (Order::Osp, vec![o, s]),
            (false, false, true) => (Order::Osp, vec![o]),
            (false, true, false) => (Order::Pos, vec![p]),
            _ => (Order::Spo, vec![s, p, o]),
        };
        (order, key.into_iter().map_while(|k| k).collect())
    }

    fn index(&self, order: Order) -> &[[Id; 3]] {
        match order {
            Order::Spo => &self.spo,
            Order::Pos => &self.pos,
            Order::Osp => &self.osp,
        }
    }

    fn range(&self, pattern: IdPattern) -> (Order, &[[Id; 3]]) {
        let (order, key) = self.pick(pattern);
        let index = self.index(order);
        let lo = index.partition_point(|t| t[..key.len()] < key[..]);
        let hi = lo + index[lo..].partition_point(|t| t[..key.len()] == key[..]);
        (order, &index[lo..hi])
    }

    /// Exact number of triples matching `pattern`.
    pub fn count(&self, pattern: IdPattern) -> usize {
        self.range(pattern).1.len()
    }

    /// Matching triples in `[s, p, o]` form.
    pub fn scan(&self, pattern: IdPattern) -> impl Iterator<Item = [Id; 3]> + '_ {
        let (order, slice) = self.range(pattern);
        slice.iter().map(move |t| order.unpermute(*t))
    }

    pub fn id_triples(&self) -> &[[Id; 3]] {
        &self.spo
    }

    pub fn to_graph(&self) -> Graph {
        self.spo
            .iter()
            .map(|&[s, p, o]| {
                let pred = self.term(p).as_iri().expect("predicate is an IRI").clone();
                Triple::from_parts(self.term(s).clone(), pred, self.term(o).clone())
            })
            .collect()
    }

    /// True when the three indices hold the same triple set.
    pub fn indices_coherent(&self) -> bool {
        let from = |order: Order, index: &[[Id; 3]]| -> Vec<[Id; 3]> {
            let mut v: Vec<_> = index.iter().map(|t| order.unpermute(*t)).collect();
            v.sort_unstable();
            v
        };
        let spo = from(Order::Spo, &self.spo);
        spo.windows(2).all(|w| w[0] < w[1])
            && spo == from(Order::Pos, &self.pos)
            && spo == from(Order::Osp, &self.osp)
    }

    fn iris_typed(&self, class: &Iri) -> Vec<Id> {
        let (Some(t), Some(c)) = (
            self.id(&rdf::type_().into()),
            self.id(&class.clone().into()),
        ) else {
            return Vec::new();
        };
        self.scan([None, Some(t), Some(c)])
            .map(|[s, _, _]| s)
            .collect()
    }

    fn pairs_of(&self, predicate: &Iri) -> Vec<(Id, Id)> {
        match self.id(&predicate.clone().into()) {
            Some(p) => self
                .scan([None, Some(p), None])
                .map(|[s, _, o]| (s, o))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Run `rules` to a fixpoint. On budget overflow the partial closure
    /// stays in the store.
    pub fn materialize(&mut self, rules: &Rules) -> Result<MaterializeReport, StoreError> {
        let mut transitive: BTreeSet<Id> = rules
            .transitive
            .iter()
            .map(|p| self.intern(&p.clone().into()))
            .collect();
        let mut symmetric: BTreeSet<Id> = rules
            .symmetric
            .iter()
            .map(|p| self.intern(&p.clone().into()))
            .collect();
        let mut inverse: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
        for (p, q) in &rules.inverse {
            let (p, q) = (
                self.intern(&p.clone().into()),
                self.intern(&q.clone().into()),
            );
            inverse.entry(p).or_default().insert(q);
            inverse.entry(q).or_default().insert(p);
        }
        let mut supers: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
        if rules.from_store {
            transitive.extend(self.iris_typed(&owl::transitive_property()));
            symmetric.extend(self.iris_typed(&owl::symmetric_property()));
            for (p, q) in self.pairs_of(&owl::inverse_of()) {
                inverse.entry(p).or_default().insert(q);
                inverse.entry(q).or_default().insert(p);
            }
        }
        if rules.subproperty {
            let top = self.id(&owl::top_object_property().into());
            for (p, q) in self.pairs_of(&rdfs::sub_property_of()) {
                if Some(q) != top && p != q {
                    supers.entry(p).or_default().insert(q);
                }
            }
            // Close the hierarchy so one round lifts a triple all the way up.
            loop {
                let mut changed = false;
                let snapshot = supers.clone();
                for set in supers.values_mut() {
                    let extra: Vec<Id> = set
                        .iter()
                        .flat_map(|q| snapshot.get(q).into_iter().flatten().copied())
                        .collect();
                    for e in extra {
                        changed |= set.insert(e);
                    }
                }
                if !changed {
                    break;
                }
            }
        }

        let start = self.len();
        let mut delta: Vec<[Id; 3]> = self.spo.clone();
        let mut rounds = 0;
        while !delta.is_empty() {
            rounds += 1;
            let mut derived = Vec::new();
            for &[s, p, o] in &delta {
                for &q in supers.get(&p).into_iter().flatten() {
                    derived.push([s, q, o]);
                }
                for &q in inverse.get(&p).into_iter().flatten() {
                    derived.push([o, q, s]);
                }
                if symmetric.contains(&p) {
                    derived.push([o, p, s]);
                }
                if transitive.contains(&p) {
                    derived.extend(
                        self.scan([Some(o), Some(p), None])
                            .map(|[_, _, x]| [s, p, x]),
                    );
                    derived.extend(
                        self.scan([None, Some(p), Some(s)])
                            .map(|[x, _, _]| [x, p, o]),
                    );
                }
            }
            delta = self.insert_ids(derived);
            if self.len() > rules.budget {
                return Err(StoreError::BudgetExceeded {
                    budget: rules.budget,
                    size: self.len(),
                });
            }
        }
        Ok(MaterializeReport {
            added: self.len() - start,
            rounds,
        })
    }
}

fn merge(a: Vec<[Id; 3]>, b: Vec<[Id; 3]>) -> Vec<[Id; 3]> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rules {
    pub transitive: BTreeSet<Iri>,
    pub symmetric: BTreeSet<Iri>,
    pub inverse: BTreeSet<(Iri, Iri)>,
    /// Lift triples along `rdfs:subPropertyOf` edges found in the store.
    pub subproperty: bool,
    /// Also take transitive, symmetric and inverse declarations from OWL
    /// typings in the store.
    pub from_store: bool,
    pub budget: usize,
}

pub const DEFAULT_BUDGET: usize = 10_000_000;

impl Default for Rules {
    fn default() -> Self {
        Rules {
            transitive: BTreeSet::new(),
            symmetric: BTreeSet::new(),
            inverse: BTreeSet::new(),
            subproperty: false,
            from_store: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Rules {
    pub fn none() -> Self {
        Rules::default()
    }

    pub fn transitive(p: Iri) -> Self {
        let mut r = Rules::default();
        r.transitive.insert(p);
        r
    }

    /// Everything: configured characteristics, store typings and
    /// sub-property lifting.
    pub fn all(ch: &Characteristics) -> Self {
        Rules {
            transitive: ch.transitive.clone(),
            symmetric: ch.symmetric.clone(),
            inverse: ch.inverse.clone(),
            subproperty: true,
            from_store: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl From<&Characteristics> for Rules {
    fn from(ch: &Characteristics) -> Self {
        Rules {
            transitive: ch.transitive.clone(),
            symmetric: ch.symmetric.clone(),
            inverse: ch.inverse.clone(),
            ..Rules::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaterializeReport {
    pub added: usize,
    pub rounds: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }

    fn chain(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 1..n {
            g.add(
                iri(&format!("P{i}")),
                &iri("p"),
                iri(&format!("P{}", i + 1)),
            );
        }
        g
    }

    #[test]
    fn load_is_idempotent() {
        let mut s = Store::new();
        let g = chain(2);
        assert_eq!(s.load(&g), 1);
        assert_eq!(s.load(&g), 0);
        assert_eq!((s.spo.len(), s.pos.len(), s.osp.len()), (1, 1, 1));
        assert!(s.indices_coherent());
    }

    #[test]
    fn scans_by_every_shape() {
        let s = Store::from_graph(&chain(5));
        let p = s.id(&iri("p").into());
        let p2 = s.id(&iri("P2").into());
        assert_eq!(s.count([None, None, None]), 4);
        assert_eq!(s.count([None, p, None]), 4);
        assert_eq!(s.count([p2, None, None]), 1);
        assert_eq!(s.count([None, None, p2]), 1);
        assert_eq!(s.count([p2, None, s.id(&iri("P3").into())]), 1);
        assert_eq!(s.count([None, p, p2]), 1);
        assert_eq!(s.count([p2, p, p2]), 0);
        let got: Vec<_> = s.scan([None, None, p2]).collect();
        assert_eq!(
            got,
            vec![[s.id(&iri("P1").into()).unwrap(), p.unwrap(), p2.unwrap()]]
        );
    }

    #[test]
    fn transitive_chain() {
        let mut s = Store::from_graph(&chain(4));
        let r = s.materialize(&Rules::transitive(iri("p"))).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(r.added, 3);
        assert!(s.indices_coherent());
        assert_eq!(
            s.materialize(&Rules::transitive(iri("p"))).unwrap().added,
            0
        );
        let mut e = Store::new();
        assert_eq!(
            e.materialize(&Rules::transitive(iri("p"))).unwrap().added,
            0
        );
    }

    #[test]
    fn subproperty_inverse_symmetric() {
        let mut g = Graph::new();
        g.add(iri("a"), &iri("child"), iri("b"));
        g.add(iri("child"), &rdfs::sub_property_of(), iri("rel"));
        g.add(iri("rel"), &rdfs::sub_property_of(), iri("top"));
        g.add(iri("child"), &owl::inverse_of(), iri("parent"));
        g.add(iri("x"), &iri("near"), iri("y"));
        g.add(iri("near"), &rdf::type_(), owl::symmetric_property());
        let mut s = Store::from_graph(&g);
        s.materialize(&Rules::all(&Characteristics::default()))
            .unwrap();
        let out = s.to_graph();
        assert!(out.has(&iri("a").into(), &iri("top"), &iri("b").into()));
        assert!(out.has(&iri("b").into(), &iri("parent"), &iri("a").into()));
        assert!(out.has(&iri("y").into(), &iri("near"), &iri("x").into()));
    }

    #[test]
    fn budget_aborts_with_partial_closure() {
        let mut s = Store::from_graph(&chain(30));
        let mut rules = Rules::transitive(iri("p"));
        rules.budget = 100;
        let err = s.materialize(&rules).unwrap_err();
        assert!(matches!(
            err,
            StoreError::BudgetExceeded { budget: 100, .. }
        ));
        assert!(s.len() > 29);
        assert!(s.indices_coherent());
    }
}
