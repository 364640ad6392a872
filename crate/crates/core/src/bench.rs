//! Paired-query benchmark: each pair asks the same question of the
//! relationship-as-instance shape and of the direct-property shape.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abox::{convert, ConversionConfig, Mode};
use crate::diag::Diagnostic;
use crate::express::{parse_schema_bytes, ExpressError};
use crate::psd::{parse_psd_bytes, PsdDocument, PsdError};
use crate::sparql::{evaluate, parse_query, EvalReport, Query, QueryError};
use crate::step::{parse_spf_bytes, StepError};
use crate::store::{Rules, Store, StoreError};
use crate::synth::{generate_synthetic, GroundTruth, SynthParams};
use crate::tbox::{build_tbox, Characteristics, CharacteristicsError};
use crate::vocab::Namespaces;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bench spec: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Query { path: PathBuf, source: QueryError },
    #[error("{path}: {source}")]
    Express { path: PathBuf, source: ExpressError },
    #[error("{path}: {source}")]
    Step { path: PathBuf, source: StepError },
    #[error("{path}: {source}")]
    Psd { path: PathBuf, source: PsdError },
    #[error("{path}: line {}: {}", source.line, source.message)]
    Characteristics {
        path: PathBuf,
        source: CharacteristicsError,
    },
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl BenchError {
    /// Configuration problems are usage errors; everything else is an
    /// input that failed to parse or load.
    pub fn is_usage(&self) -> bool {
        matches!(self, BenchError::Config(_))
    }
}

/// Where spec-relative paths are read from.
pub trait Files {
    fn read(&self, path: &Path) -> std::io::Result<Vec<u8>>;
    /// `(path, bytes)` for every `.xml` file directly in `dir`, sorted.
    fn xml_files(&self, dir: &Path) -> std::io::Result<Vec<(PathBuf, Vec<u8>)>>;
}

/// Plain files below a base directory.
pub struct Disk {
    pub base: PathBuf,
}

impl Files for Disk {
    fn read(&self, path: &Path) -> std::io::Result<Vec<u8>> {
        std::fs::read(self.base.join(path))
    }

    fn xml_files(&self, dir: &Path) -> std::io::Result<Vec<(PathBuf, Vec<u8>)>> {
        let mut out = Vec::new();
        for entry in std::fs::read_dir(self.base.join(dir))? {
            let p = entry?.path();
            if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml")) {
                let bytes = std::fs::read(&p)?;
                out.push((p, bytes));
            }
        }
        out.sort();
        Ok(out)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    dataset: RawDataset,
    #[serde(default)]
    bench: RawBench,
    #[serde(default, rename = "pair")]
    pairs: Vec<RawPair>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    schema: PathBuf,
    psd_dir: Option<PathBuf>,
    step: Option<PathBuf>,
    synthetic: Option<SynthParams>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBench {
    #[serde(default = "default_reps")]
    repetitions: usize,
    #[serde(default)]
    inference: Vec<PathBuf>,
}

impl Default for RawBench {
    fn default() -> Self {
        RawBench {
            repetitions: default_reps(),
            inference: Vec::new(),
        }
    }
}

fn default_reps() -> usize {
    20
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    name: String,
    ifcowl: PathBuf,
    ifcwod: PathBuf,
    truth: Option<String>,
}

#[derive(Clone, Debug)]
pub enum DataSource {
    Synthetic(SynthParams),
    Step { path: PathBuf, bytes: Vec<u8> },
}

#[derive(Clone, Debug)]
pub struct QueryPair {
    pub name: String,
    pub ifcowl_path: PathBuf,
    pub ifcwod_path: PathBuf,
    pub ifcowl: Query,
    pub ifcwod: Query,
    /// Ground-truth key, looked up when the data is synthetic.
    pub truth: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub schema_path: PathBuf,
    pub schema: Vec<u8>,
    pub psds: Vec<PsdDocument>,
    pub source: DataSource,
    pub repetitions: usize,
    pub inference: Vec<Characteristics>,
    pub pairs: Vec<QueryPair>,
}

fn read(files: &dyn Files, path: &Path) -> Result<Vec<u8>, BenchError> {
    files.read(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_query(files: &dyn Files, path: &Path) -> Result<Query, BenchError> {
    let text = crate::diag::decode_text(&read(files, path)?);
    parse_query(&text).map_err(|source| BenchError::Query {
        path: path.to_path_buf(),
        source,
    })
}

impl BenchSpec {
    pub fn load(path: &Path) -> Result<BenchSpec, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        BenchSpec::from_toml(&text, &Disk { base }, &Namespaces::default())
    }

    pub fn from_toml(
        text: &str,
        files: &dyn Files,
        ns: &Namespaces,
    ) -> Result<BenchSpec, BenchError> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        if raw.bench.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        let source = match (raw.dataset.step, raw.dataset.synthetic) {
            (Some(path), None) => DataSource::Step {
                bytes: read(files, &path)?,
                path,
            },
            (None, Some(p)) => DataSource::Synthetic(p),
            _ => {
                return Err(BenchError::Config(
                    "[dataset] needs exactly one of `step` or `synthetic`".into(),
                ))
            }
        };
        let mut psds = Vec::new();
        if let Some(dir) = &raw.dataset.psd_dir {
            let entries = files.xml_files(dir).map_err(|source| BenchError::Io {
                path: dir.clone(),
                source,
            })?;
            for (path, bytes) in entries {
                psds.push(
                    parse_psd_bytes(&bytes).map_err(|source| BenchError::Psd { path, source })?,
                );
            }
        }
        let mut inference = Vec::new();
        for path in &raw.bench.inference {
            let text = crate::diag::decode_text(&read(files, path)?);
            inference.push(Characteristics::parse(&text, ns).map_err(|source| {
                BenchError::Characteristics {
                    path: path.clone(),
                    source,
                }
            })?);
        }
        let mut pairs = Vec::new();
        for p in raw.pairs {
            pairs.push(QueryPair {
                ifcowl: read_query(files, &p.ifcowl)?,
                ifcwod: read_query(files, &p.ifcwod)?,
                name: p.name,
                ifcowl_path: p.ifcowl,
                ifcwod_path: p.ifcwod,
                truth: p.truth,
            });
        }
        Ok(BenchSpec {
            schema: read(files, &raw.dataset.schema)?,
            schema_path: raw.dataset.schema,
            psds,
            source,
            repetitions: raw.bench.repetitions,
            inference,
            pairs,
        })
    }

    /// Convert the dataset in mode `both`, load it with the TBox and run
    /// the configured inference.
    pub fn prepare(&self, ns: &Namespaces) -> Result<Prepared, BenchError> {
        let schema = parse_schema_bytes(&self.schema).map_err(|source| BenchError::Express {
            path: self.schema_path.clone(),
            source,
        })?;
        let (model, truth) = match &self.source {
            DataSource::Synthetic(p) => {
                let s = generate_synthetic(p);
                (s.model, Some(s.truth))
            }
            DataSource::Step { path, bytes } => (
                parse_spf_bytes(bytes).map_err(|source| BenchError::Step {
                    path: path.clone(),
                    source,
                })?,
                None,
            ),
        };
        let tbox = build_tbox(Some(&schema), &self.psds, ns);
        let cfg = ConversionConfig {
            mode: Mode::Both,
            namespaces: ns.clone(),
            ..ConversionConfig::default()
        };
        let conv = convert(&model, &schema, &tbox.graph, &cfg);
        let mut store = Store::from_graph(&conv.graph);
        store.load(&tbox.graph);
        let loaded = store.len();
        for ch in &self.inference {
            store.materialize(&Rules::from(ch))?;
        }
        let mut diagnostics = tbox.diagnostics;
        diagnostics.extend(model.warnings);
        diagnostics.extend(conv.diagnostics);
        Ok(Prepared {
            instances: model.instances.len(),
            inferred: store.len() - loaded,
            store,
            truth,
            diagnostics,
        })
    }
}

pub struct Prepared {
    pub store: Store,
    pub truth: Option<GroundTruth>,
    pub instances: usize,
    pub inferred: usize,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairReport {
    pub name: String,
    pub results_ifcowl: usize,
    pub results_ifcwod: usize,
    pub equal: bool,
    pub expected: Option<usize>,
    pub matches_truth: Option<bool>,
    pub patterns_ifcowl: usize,
    pub patterns_ifcwod: usize,
    pub pattern_reduction_pct: f64,
    pub rows_ifcowl: usize,
    pub rows_ifcwod: usize,
    pub join_order_ifcowl: Vec<usize>,
    pub join_order_ifcwod: Vec<usize>,
    pub mean_seconds_ifcowl: f64,
    pub stddev_seconds_ifcowl: f64,
    pub mean_seconds_ifcwod: f64,
    pub stddev_seconds_ifcwod: f64,
    pub time_reduction_pct: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub pairs: usize,
    pub passed: usize,
    /// Means over passing pairs only; absent when none passed.
    pub mean_pattern_reduction_pct: Option<f64>,
    pub mean_time_reduction_pct: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BenchReport {
    pub instances: usize,
    pub triples: usize,
    pub inferred: usize,
    pub repetitions: usize,
    pub pairs: Vec<PairReport>,
    pub summary: Summary,
}

impl BenchReport {
    pub fn all_passed(&self) -> bool {
        self.pairs.iter().all(|p| p.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table; times in milliseconds with three decimals.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<34} {:>7} {:>7} {:>5} {:>6} {:>7} {:>8} {:>8} {:>10} {:>10} {:>7}\n",
            "pair", "#Q", "#Q'", "eq", "pat", "pat%", "rows", "rows'", "ms", "ms'", "time%"
        );
        for p in &self.pairs {
            out.push_str(&format!(
                "{:<34} {:>7} {:>7} {:>5} {:>6} {:>7.1} {:>8} {:>8} {:>10.3} {:>10.3} {:>7.2}\n",
                p.name,
                p.results_ifcowl,
                p.results_ifcwod,
                if p.passed { "yes" } else { "NO" },
                format!("{}/{}", p.patterns_ifcowl, p.patterns_ifcwod),
                p.pattern_reduction_pct,
                p.rows_ifcowl,
                p.rows_ifcwod,
                p.mean_seconds_ifcowl * 1e3,
                p.mean_seconds_ifcwod * 1e3,
                p.time_reduction_pct,
            ));
        }
        out.push_str(&format!(
            "{} of {} pairs passed",
            self.summary.passed, self.summary.pairs
        ));
        if let (Some(pr), Some(tr)) = (
            self.summary.mean_pattern_reduction_pct,
            self.summary.mean_time_reduction_pct,
        ) {
            out.push_str(&format!(
                "; mean pattern reduction {pr:.1}%, mean time reduction {tr:.2}%"
            ));
        }
        out.push('\n');
        out
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn timed(store: &Store, q: &Query, reps: usize) -> (EvalReport, Vec<f64>) {
    // Warm-up run, excluded from the timings.
    let first = evaluate(store, q);
    let times = (0..reps)
        .map(|_| {
            let t = Instant::now();
            let r = evaluate(store, q);
            let s = t.elapsed().as_secs_f64();
            std::hint::black_box(r);
            s
        })
        .collect();
    (first, times)
}

fn run_pair(
    pair: &QueryPair,
    store: &Store,
    truth: Option<&GroundTruth>,
    reps: usize,
) -> PairReport {
    let (a, ta) = timed(store, &pair.ifcowl, reps);
    let (b, tb) = timed(store, &pair.ifcwod, reps);
    let (ma, sa) = mean_sd(&ta);
    let (mb, sb) = mean_sd(&tb);
    let equal = a.sorted_solutions() == b.sorted_solutions();
    let expected = truth
        .zip(pair.truth.as_deref())
        .and_then(|(t, k)| t.answer(k));
    let matches_truth = expected.map(|e| e == a.solutions.len() && e == b.solutions.len());
    let (pa, pb) = (pair.ifcowl.pattern_count(), pair.ifcwod.pattern_count());
    PairReport {
        name: pair.name.clone(),
        results_ifcowl: a.solutions.len(),
        results_ifcwod: b.solutions.len(),
        equal,
        expected,
        matches_truth,
        patterns_ifcowl: pa,
        patterns_ifcwod: pb,
        pattern_reduction_pct: 100.0 * (1.0 - pb as f64 / pa as f64),
        rows_ifcowl: a.intermediate_rows,
        rows_ifcwod: b.intermediate_rows,
        join_order_ifcowl: a.join_order,
        join_order_ifcwod: b.join_order,
        mean_seconds_ifcowl: ma,
        stddev_seconds_ifcowl: sa,
        mean_seconds_ifcwod: mb,
        stddev_seconds_ifcwod: sb,
        time_reduction_pct: if ma > 0.0 {
            100.0 * (1.0 - mb / ma)
        } else {
            0.0
        },
        passed: equal && matches_truth != Some(false),
    }
}

/// Evaluate every pair. Pairs run one after another unless `parallel`,
/// which is meant for correctness runs since timings then interfere.
pub fn run_bench(spec: &BenchSpec, prepared: &Prepared, parallel: bool) -> BenchReport {
    let store = &prepared.store;
    let truth = prepared.truth.as_ref();
    let reps = spec.repetitions;
    let pairs: Vec<PairReport> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = spec
                .pairs
                .iter()
                .map(|p| s.spawn(move || run_pair(p, store, truth, reps)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("pair thread"))
                .collect()
        })
    } else {
        spec.pairs
            .iter()
            .map(|p| run_pair(p, store, truth, reps))
            .collect()
    };
    let ok: Vec<&PairReport> = pairs.iter().filter(|p| p.passed).collect();
    let avg = |f: fn(&PairReport) -> f64| {
        (!ok.is_empty()).then(|| ok.iter().map(|p| f(p)).sum::<f64>() / ok.len() as f64)
    };
    let summary = Summary {
        pairs: pairs.len(),
        passed: ok.len(),
        mean_pattern_reduction_pct: avg(|p| p.pattern_reduction_pct),
        mean_time_reduction_pct: avg(|p| p.time_reduction_pct),
    };
    BenchReport {
        instances: prepared.instances,
        triples: store.len(),
        inferred: prepared.inferred,
        repetitions: reps,
        pairs,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_deviation() {
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(mean_sd(&[4.0]), (4.0, 0.0));
    }

    #[test]
    fn config_errors_are_usage_errors() {
        let files = Disk {
            base: PathBuf::from("."),
        };
        let ns = Namespaces::default();
        let e = BenchSpec::from_toml("[dataset]\nschema = \"x\"\n", &files, &ns).unwrap_err();
        assert!(e.is_usage(), "{e}");
        let e = BenchSpec::from_toml(
            "[dataset]\nschema=\"x\"\n[dataset.synthetic]\n[bench]\nrepetitions = 0\n",
            &files,
            &ns,
        )
        .unwrap_err();
        assert!(e.is_usage());
        let e =
            BenchSpec::from_toml("[dataset]\nschema=\"x\"\nbogus=1\n", &files, &ns).unwrap_err();
        assert!(e.is_usage());
    }
}
