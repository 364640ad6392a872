//! Seeded synthetic building models with known answers for the bundled
//! benchmark queries.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::step::{StepInstance, StepModel, StepParam};

/// Spaces whose `ElevationWithFlooring` exceeds this many metres count as
/// raised. The shipped Q3 pair filters on the same constant.
pub const HEIGHT_THRESHOLD: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthParams {
    pub seed: u64,
    pub walls: usize,
    /// How many of the walls carry `IsExternal = TRUE`; capped at `walls`.
    pub external_walls: usize,
    pub doors: usize,
    /// Doors whose property set includes a `Reference`; capped at `doors`.
    pub doors_with_reference: usize,
    pub spaces: usize,
    pub storeys: usize,
    /// Tasks linked into a single predecessor chain.
    pub processes: usize,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            seed: 7,
            walls: 1000,
            external_walls: 370,
            doors: 300,
            doors_with_reference: 200,
            spaces: 200,
            storeys: 4,
            processes: 50,
        }
    }
}

impl SynthParams {
    pub fn empty(seed: u64) -> Self {
        SynthParams {
            seed,
            walls: 0,
            external_walls: 0,
            doors: 0,
            doors_with_reference: 0,
            spaces: 0,
            storeys: 0,
            processes: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub external_walls: usize,
    pub doors_with_reference: usize,
    /// Spaces above [`HEIGHT_THRESHOLD`].
    pub raised_spaces: usize,
    /// Direct `IfcRelSequence` links.
    pub predecessor_pairs: usize,
    /// Pairs after transitive closure of the chain.
    pub predecessor_closure: usize,
}

impl GroundTruth {
    /// Look an answer up by field name, as written in bench specs.
    pub fn answer(&self, key: &str) -> Option<usize> {
        Some(match key {
            "external_walls" => self.external_walls,
            "doors_with_reference" => self.doors_with_reference,
            "raised_spaces" => self.raised_spaces,
            "predecessor_pairs" => self.predecessor_pairs,
            "predecessor_closure" => self.predecessor_closure,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Synthetic {
    pub model: StepModel,
    pub truth: GroundTruth,
}

struct Builder {
    model: StepModel,
    rng: ChaCha8Rng,
    owner: Option<u64>,
}

const GUID_CHARS: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_$";

fn s(text: impl Into<String>) -> StepParam {
    StepParam::String(text.into())
}

fn r(id: u64) -> StepParam {
    StepParam::Reference(id)
}

fn typed(kw: &str, inner: StepParam) -> StepParam {
    StepParam::Typed(kw.to_string(), Box::new(inner))
}

fn refs(ids: &[u64]) -> StepParam {
    StepParam::List(ids.iter().map(|&i| r(i)).collect())
}

fn boolean(b: bool) -> StepParam {
    StepParam::Enum(if b { "T" } else { "F" }.into())
}

const U: StepParam = StepParam::Unset;

impl Builder {
    fn add(&mut self, keyword: &str, params: Vec<StepParam>) -> u64 {
        let id = self.model.next_id();
        self.model.insert(StepInstance {
            id,
            keyword: keyword.to_string(),
            params,
            line: 0,
        });
        id
    }

    fn guid(&mut self) -> StepParam {
        let g: String = (0..22)
            .map(|_| GUID_CHARS[self.rng.random_range(0..GUID_CHARS.len())] as char)
            .collect();
        s(g)
    }

    fn owner(&mut self) -> u64 {
        if let Some(o) = self.owner {
            return o;
        }
        let o = self.add("IFCOWNERHISTORY", vec![StepParam::Integer(1_400_000_000)]);
        self.owner = Some(o);
        o
    }

    fn root(&mut self, name: Option<String>) -> Vec<StepParam> {
        let owner = self.owner();
        vec![self.guid(), r(owner), name.map_or(U, s), U]
    }

    fn placement(&mut self, relative_to: Option<u64>) -> u64 {
        let coords = (0..3)
            .map(|_| StepParam::real(f64::from(self.rng.random_range(0..4000)) / 100.0))
            .collect();
        let point = self.add("IFCCARTESIANPOINT", vec![StepParam::List(coords)]);
        let axes = self.add("IFCAXIS2PLACEMENT3D", vec![r(point), U, U]);
        self.add("IFCLOCALPLACEMENT", vec![relative_to.map_or(U, r), r(axes)])
    }

    fn single(&mut self, name: &str, value: StepParam, unit: Option<u64>) -> u64 {
        self.add(
            "IFCPROPERTYSINGLEVALUE",
            vec![s(name), U, value, unit.map_or(U, r)],
        )
    }

    /// A property set with its own defining relationship.
    fn pset(&mut self, object: u64, name: &str, props: Vec<u64>) {
        let mut p = self.root(Some(name.to_string()));
        p.push(refs(&props));
        let set = self.add("IFCPROPERTYSET", p);
        let mut rel = self.root(None);
        rel.push(refs(&[object]));
        rel.push(r(set));
        self.add("IFCRELDEFINESBYPROPERTIES", rel);
    }

    fn relation(&mut self, keyword: &str, tail: Vec<StepParam>) -> u64 {
        let mut p = self.root(None);
        p.extend(tail);
        self.add(keyword, p)
    }
}

/// Deterministic for a given `params`; all counts zero give an empty model.
pub fn generate_synthetic(params: &SynthParams) -> Synthetic {
    let mut b = Builder {
        model: StepModel {
            file_schema: vec!["IFC4".into()],
            ..StepModel::default()
        },
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        owner: None,
    };
    let mut truth = GroundTruth::default();

    let mut storeys = Vec::new();
    for i in 0..params.storeys {
        let pl = b.placement(None);
        let mut p = b.root(Some(format!("Level {i}")));
        p.extend([
            U,
            r(pl),
            U,
            U,
            StepParam::Enum("ELEMENT".into()),
            StepParam::real(3.0 * i as f64),
        ]);
        storeys.push((b.add("IFCBUILDINGSTOREY", p), pl, Vec::new(), Vec::new()));
    }

    let mut external: Vec<bool> = (0..params.walls)
        .map(|i| i < params.external_walls)
        .collect();
    external.shuffle(&mut b.rng);
    for (i, &ext) in external.iter().enumerate() {
        let parent = (!storeys.is_empty()).then(|| i % storeys.len());
        let pl = b.placement(parent.map(|k| storeys[k].1));
        let mut p = b.root(Some(format!("Wall {i}")));
        p.extend([U, r(pl), U, s(format!("W{i}"))]);
        let wall = b.add("IFCWALLSTANDARDCASE", p);
        if let Some(k) = parent {
            storeys[k].2.push(wall);
        }
        let prop = b.single("IsExternal", typed("IFCBOOLEAN", boolean(ext)), None);
        b.pset(wall, "Pset_WallCommon", vec![prop]);
        truth.external_walls += usize::from(ext);
    }

    let mut referenced: Vec<bool> = (0..params.doors)
        .map(|i| i < params.doors_with_reference)
        .collect();
    referenced.shuffle(&mut b.rng);
    for (i, &has_ref) in referenced.iter().enumerate() {
        let parent = (!storeys.is_empty()).then(|| i % storeys.len());
        let mut p = b.root(Some(format!("Door {i}")));
        let height = StepParam::real(f64::from(b.rng.random_range(200..240)) / 100.0);
        p.extend([U, U, U, s(format!("D{i}")), height, StepParam::real(0.9)]);
        let door = b.add("IFCDOOR", p);
        if let Some(k) = parent {
            storeys[k].2.push(door);
        }
        let ext = b.rng.random_bool(0.2);
        let mut props = vec![b.single("IsExternal", typed("IFCBOOLEAN", boolean(ext)), None)];
        if has_ref {
            props.push(b.single(
                "Reference",
                typed("IFCIDENTIFIER", s(format!("D-{i:04}"))),
                None,
            ));
        }
        b.pset(door, "Pset_DoorCommon", props);
        truth.doors_with_reference += usize::from(has_ref);
    }

    let area_unit = (params.spaces > 0).then(|| {
        b.add(
            "IFCSIUNIT",
            vec![
                StepParam::Derived,
                StepParam::Enum("AREAUNIT".into()),
                U,
                StepParam::Enum("SQUARE_METRE".into()),
            ],
        )
    });
    for i in 0..params.spaces {
        let parent = (!storeys.is_empty()).then(|| i % storeys.len());
        // Half-metre steps keep the comparison with the threshold exact.
        let elevation = f64::from(b.rng.random_range(0..25u32)) * 0.5;
        let mut p = b.root(Some(format!("Space {i}")));
        p.extend([
            U,
            U,
            U,
            s(format!("Room {i}")),
            StepParam::Enum("ELEMENT".into()),
            StepParam::Enum("INTERNAL".into()),
            StepParam::real(elevation),
        ]);
        let space = b.add("IFCSPACE", p);
        if let Some(k) = parent {
            storeys[k].3.push(space);
        }
        let area = StepParam::real(f64::from(b.rng.random_range(800..5000)) / 100.0);
        let props = vec![
            b.single(
                "Reference",
                typed("IFCIDENTIFIER", s(format!("S-{i:04}"))),
                None,
            ),
            b.single("GrossPlannedArea", typed("IFCAREAMEASURE", area), area_unit),
        ];
        b.pset(space, "Pset_SpaceCommon", props);
        truth.raised_spaces += usize::from(elevation > HEIGHT_THRESHOLD);
    }

    for (storey, _, elements, spaces) in std::mem::take(&mut storeys) {
        if !elements.is_empty() {
            b.relation(
                "IFCRELCONTAINEDINSPATIALSTRUCTURE",
                vec![refs(&elements), r(storey)],
            );
        }
        if !spaces.is_empty() {
            b.relation("IFCRELAGGREGATES", vec![r(storey), refs(&spaces)]);
        }
    }

    let mut tasks = Vec::new();
    for i in 0..params.processes {
        let mut p = b.root(Some(format!("Task {i}")));
        p.extend([U, s(format!("T{i}")), U, U, U, boolean(false), U]);
        tasks.push(b.add("IFCTASK", p));
    }
    for w in tasks.windows(2) {
        b.relation(
            "IFCRELSEQUENCE",
            vec![
                r(w[0]),
                r(w[1]),
                U,
                StepParam::Enum("FINISH_START".into()),
                U,
            ],
        );
    }
    let n = tasks.len();
    truth.predecessor_pairs = n.saturating_sub(1);
    truth.predecessor_closure = n * n.saturating_sub(1) / 2;

    Synthetic {
        model: b.model,
        truth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_counts_give_empty_model() {
        assert!(generate_synthetic(&SynthParams::empty(3)).model.is_empty());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let p = SynthParams {
            walls: 30,
            external_walls: 11,
            ..SynthParams::default()
        };
        let a = generate_synthetic(&p).model.to_spf();
        assert_eq!(a, generate_synthetic(&p).model.to_spf());
        let other = generate_synthetic(&SynthParams { seed: 8, ..p })
            .model
            .to_spf();
        assert_ne!(a, other);
    }

    #[test]
    fn truth_by_construction() {
        let p = SynthParams {
            walls: 100,
            external_walls: 37,
            processes: 4,
            ..SynthParams::default()
        };
        let t = generate_synthetic(&p).truth;
        assert_eq!(t.external_walls, 37);
        assert_eq!(t.predecessor_pairs, 3);
        assert_eq!(t.predecessor_closure, 6);
        assert_eq!(t.answer("doors_with_reference"), Some(200));
        assert_eq!(t.answer("nope"), None);
    }

    #[test]
    fn default_size_is_benchmark_scale() {
        let s = generate_synthetic(&SynthParams::default());
        assert!(s.model.len() >= 5000, "{}", s.model.len());
        assert!(s.model.dangling_references().is_empty());
    }
}
