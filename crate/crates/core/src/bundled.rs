//! Fixtures compiled into the library, so examples and tests run without
//! locating files on disk.

use std::path::{Path, PathBuf};

use crate::bench::{BenchSpec, Files};
use crate::express::{parse_schema, ExpressSchema};
use crate::psd::{parse_psd, PsdDocument};
use crate::step::{parse_spf, StepModel};
use crate::tbox::{build_tbox, Forged};
use crate::vocab::Namespaces;

/// Excerpt of an exported wall model: one property set shared by eight
/// walls through a single relationship instance.
pub const WALL_EXCERPT_IFC: &str = include_str!("../fixtures/wall_excerpt.ifc");
/// Process and sequence declarations with their inverse attributes.
pub const PROCESS_SEQUENCE_EXP: &str = include_str!("../fixtures/process_sequence.exp");
/// Schema subset covering every entity the fixtures and generator use.
pub const IFC_SUBSET_EXP: &str = include_str!("../fixtures/ifc_subset.exp");
pub const CHARACTERISTICS: &str = include_str!("../fixtures/characteristics.txt");
pub const BENCH_TOML: &str = include_str!("../fixtures/bench.toml");
pub const REPORT_SCHEMA: &str = include_str!("../fixtures/report.schema.json");

pub const PSD_FILES: [(&str, &str); 4] = [
    (
        "Pset_DoorCommon.xml",
        include_str!("../fixtures/psd/Pset_DoorCommon.xml"),
    ),
    (
        "Pset_SpaceCommon.xml",
        include_str!("../fixtures/psd/Pset_SpaceCommon.xml"),
    ),
    (
        "Pset_StackTerminalTypeCommon.xml",
        include_str!("../fixtures/psd/Pset_StackTerminalTypeCommon.xml"),
    ),
    (
        "Pset_WallCommon.xml",
        include_str!("../fixtures/psd/Pset_WallCommon.xml"),
    ),
];

pub const QUERIES: [(&str, &str); 8] = [
    (
        "q1_ifcowl",
        include_str!("../fixtures/queries/q1_ifcowl.rq"),
    ),
    (
        "q1_ifcwod",
        include_str!("../fixtures/queries/q1_ifcwod.rq"),
    ),
    (
        "q2_ifcowl",
        include_str!("../fixtures/queries/q2_ifcowl.rq"),
    ),
    (
        "q2_ifcwod",
        include_str!("../fixtures/queries/q2_ifcwod.rq"),
    ),
    (
        "q3_ifcowl",
        include_str!("../fixtures/queries/q3_ifcowl.rq"),
    ),
    (
        "q3_ifcwod",
        include_str!("../fixtures/queries/q3_ifcwod.rq"),
    ),
    (
        "predecessor_ifcowl",
        include_str!("../fixtures/queries/predecessor_ifcowl.rq"),
    ),
    (
        "predecessor_ifcwod",
        include_str!("../fixtures/queries/predecessor_ifcwod.rq"),
    ),
];

pub fn query(name: &str) -> Option<&'static str> {
    QUERIES.iter().find(|(n, _)| *n == name).map(|(_, q)| *q)
}

pub fn psd(file: &str) -> Option<&'static str> {
    PSD_FILES.iter().find(|(n, _)| *n == file).map(|(_, x)| *x)
}

pub fn ifc_subset() -> ExpressSchema {
    parse_schema(IFC_SUBSET_EXP).expect("bundled schema parses")
}

pub fn process_sequence() -> ExpressSchema {
    parse_schema(PROCESS_SEQUENCE_EXP).expect("bundled schema parses")
}

pub fn wall_excerpt() -> StepModel {
    parse_spf(WALL_EXCERPT_IFC).expect("bundled model parses")
}

pub fn psd_documents() -> Vec<PsdDocument> {
    PSD_FILES
        .iter()
        .map(|(_, xml)| parse_psd(xml).expect("bundled PSD parses"))
        .collect()
}

/// Core hierarchy, relationship properties of the schema subset and the
/// bundled property sets.
pub fn tbox(ns: &Namespaces) -> Forged {
    build_tbox(Some(&ifc_subset()), &psd_documents(), ns)
}

/// The bundled fixture directory, addressed with the same relative paths
/// as `fixtures/` on disk.
pub struct BundledFiles;

impl Files for BundledFiles {
    fn read(&self, path: &Path) -> std::io::Result<Vec<u8>> {
        let name = path.to_string_lossy().replace('\\', "/");
        let name = name.trim_start_matches("./");
        let found = match name {
            "wall_excerpt.ifc" => Some(WALL_EXCERPT_IFC),
            "process_sequence.exp" => Some(PROCESS_SEQUENCE_EXP),
            "ifc_subset.exp" => Some(IFC_SUBSET_EXP),
            "characteristics.txt" => Some(CHARACTERISTICS),
            "bench.toml" => Some(BENCH_TOML),
            "report.schema.json" => Some(REPORT_SCHEMA),
            _ => name
                .strip_prefix("queries/")
                .and_then(|q| q.strip_suffix(".rq"))
                .and_then(query)
                .or_else(|| name.strip_prefix("psd/").and_then(psd)),
        };
        found.map(|s| s.as_bytes().to_vec()).ok_or_else(|| {
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("no bundled file {name}"),
            )
        })
    }

    fn xml_files(&self, dir: &Path) -> std::io::Result<Vec<(PathBuf, Vec<u8>)>> {
        if dir.to_string_lossy().trim_end_matches('/') != "psd" {
            return Err(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "only psd/ is bundled",
            ));
        }
        Ok(PSD_FILES
            .iter()
            .map(|(n, x)| (Path::new("psd").join(n), x.as_bytes().to_vec()))
            .collect())
    }
}

/// The default benchmark: synthetic model, four query pairs.
pub fn bench_spec(ns: &Namespaces) -> BenchSpec {
    BenchSpec::from_toml(BENCH_TOML, &BundledFiles, ns).expect("bundled bench spec loads")
}
