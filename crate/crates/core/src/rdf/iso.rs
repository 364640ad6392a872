//! Graph isomorphism modulo blank-node renaming.
//!
//! Colour refinement over blank nodes followed by a backtracking search
//! restricted to equally coloured candidates.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use super::{BlankNode, Term, Triple};

pub(super) fn isomorphic(a: &BTreeSet<Triple>, b: &BTreeSet<Triple>) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ground_a, blank_a): (Vec<&Triple>, Vec<&Triple>) = a.iter().partition(|t| is_ground(t));
    let (ground_b, blank_b): (Vec<&Triple>, Vec<&Triple>) = b.iter().partition(|t| is_ground(t));
    if ground_a != ground_b || blank_a.len() != blank_b.len() {
        return false;
    }
    if blank_a.is_empty() {
        return true;
    }
    let colours_a = refine(&blank_a);
    let colours_b = refine(&blank_b);
    let mut hist_a: Vec<u64> = colours_a.values().copied().collect();
    let mut hist_b: Vec<u64> = colours_b.values().copied().collect();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return false;
    }

    let target: BTreeSet<&Triple> = blank_b.iter().copied().collect();
    let nodes: Vec<&BlankNode> = colours_a.keys().copied().collect();
    let mut mapping: HashMap<&BlankNode, &BlankNode> = HashMap::new();
    let mut used: BTreeSet<&BlankNode> = BTreeSet::new();
    search(
        &nodes,
        0,
        &colours_a,
        &colours_b,
        &mut mapping,
        &mut used,
        &blank_a,
        &target,
    )
}

fn is_ground(t: &Triple) -> bool {
    !t.subject().is_blank() && !t.object().is_blank()
}

fn blank_of(t: &Term) -> Option<&BlankNode> {
    match t {
        Term::Blank(b) => Some(b),
        _ => None,
    }
}

fn hash_of<T: Hash>(v: &T) -> u64 {
    let mut h = DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

fn refine<'a>(triples: &[&'a Triple]) -> BTreeMap<&'a BlankNode, u64> {
    let mut colours: BTreeMap<&BlankNode, u64> = BTreeMap::new();
    for t in triples {
        for b in [blank_of(t.subject()), blank_of(t.object())]
            .into_iter()
            .flatten()
        {
            colours.insert(b, 0);
        }
    }
    let n_classes = |c: &BTreeMap<&BlankNode, u64>| c.values().collect::<BTreeSet<_>>().len();
    for _ in 0..colours.len().max(1) {
        let mut next: BTreeMap<&BlankNode, Vec<u64>> = BTreeMap::new();
        for t in triples {
            let term_colour = |term: &Term| match term {
                Term::Blank(b) => colours[b],
                other => hash_of(other) | 1,
            };
            if let Some(s) = blank_of(t.subject()) {
                next.entry(s).or_default().push(hash_of(&(
                    0u8,
                    t.predicate(),
                    term_colour(t.object()),
                )));
            }
            if let Some(o) = blank_of(t.object()) {
                next.entry(o).or_default().push(hash_of(&(
                    1u8,
                    t.predicate(),
                    term_colour(t.subject()),
                )));
            }
        }
        let before = n_classes(&colours);
        let refined: BTreeMap<&BlankNode, u64> = next
            .into_iter()
            .map(|(b, mut sig)| {
                sig.sort_unstable();
                let c = hash_of(&(colours[b], sig));
                (b, c)
            })
            .collect();
        let after = n_classes(&refined);
        colours = refined;
        if after == before {
            break;
        }
    }
    colours
}

#[allow(clippy::too_many_arguments)]
fn search<'a>(
    nodes: &[&'a BlankNode],
    i: usize,
    colours_a: &BTreeMap<&'a BlankNode, u64>,
    colours_b: &BTreeMap<&'a BlankNode, u64>,
    mapping: &mut HashMap<&'a BlankNode, &'a BlankNode>,
    used: &mut BTreeSet<&'a BlankNode>,
    source: &[&'a Triple],
    target: &BTreeSet<&'a Triple>,
) -> bool {
    if i == nodes.len() {
        return source.iter().all(|t| {
            let map = |term: &Term| match term {
                Term::Blank(b) => Term::Blank(mapping[b].clone()),
                other => other.clone(),
            };
            let mapped =
                Triple::from_parts(map(t.subject()), t.predicate().clone(), map(t.object()));
            target.contains(&mapped)
        });
    }
    let node = nodes[i];
    let colour = colours_a[node];
    let candidates: Vec<&BlankNode> = colours_b
        .iter()
        .filter(|(b, c)| **c == colour && !used.contains(*b))
        .map(|(b, _)| *b)
        .collect();
    for cand in candidates {
        mapping.insert(node, cand);
        used.insert(cand);
        if search(
            nodes,
            i + 1,
            colours_a,
            colours_b,
            mapping,
            used,
            source,
            target,
        ) {
            return true;
        }
        used.remove(cand);
        mapping.remove(node);
    }
    false
}
