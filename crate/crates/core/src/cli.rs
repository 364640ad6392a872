//! Command-line front end. `run_with` is the testable entry point; it
//! writes to the given streams and returns the process exit code.
//!
//! Exit codes: 0 success, 1 usage error, 2 input that failed to parse or
//! load, 3 benchmark pairs that disagree or miss their ground truth.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::abox::{convert, ConversionConfig, Mode, ValueNodePolicy, DEFAULT_BASE};
use crate::bench::{run_bench, BenchSpec};
use crate::bundled;
use crate::diag::{decode_text, Diagnostic};
use crate::express::{parse_schema_bytes, ExpressSchema};
use crate::psd::{parse_psd_bytes, PsdDocument};
use crate::rdf::{self, Format, Graph};
use crate::sparql::{evaluate, parse_query};
use crate::step::parse_spf_bytes;
use crate::store::{Rules, Store};
use crate::tbox::{build_tbox, map_psd, Characteristics, Forged};
use crate::vocab::Namespaces;

#[derive(Parser, Debug)]
#[command(
    name = "ifcwod",
    version,
    about = "Convert IFC models to OWL/RDF and query them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutFormat {
    Turtle,
    Ntriples,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Turtle => Format::Turtle,
            OutFormat::Ntriples => Format::NTriples,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Ifcowl,
    Ifcwod,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Ifcowl => Mode::Ifcowl,
            ModeArg::Ifcwod => Mode::Ifcwod,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive the OWL hierarchy and relationship properties from an EXPRESS schema.
    DeriveTbox {
        schema: PathBuf,
        /// Also map every property set definition in this directory.
        #[arg(long)]
        psd_dir: Option<PathBuf>,
        /// Add transitive/symmetric/inverse typings from a characteristics file.
        #[arg(long)]
        characteristics: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "turtle")]
        format: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Map property set definitions (a directory or individual XML files) to OWL.
    DerivePsets {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "turtle")]
        format: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a STEP physical file to RDF.
    Convert {
        model: PathBuf,
        /// EXPRESS schema; the bundled subset when omitted.
        #[arg(long)]
        schema: Option<PathBuf>,
        /// Property set definitions; the bundled ones when omitted.
        #[arg(long)]
        psd_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "turtle")]
        format: OutFormat,
        #[arg(long, default_value = DEFAULT_BASE)]
        base: String,
        /// Emit a value node for every property value, not only unit-bearing ones.
        #[arg(long)]
        always_value_nodes: bool,
        /// Keep fixed-size lists as indexed properties.
        #[arg(long)]
        no_flatten: bool,
        /// Include the TBox in the output.
        #[arg(long)]
        with_tbox: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Materialize property characteristics over an RDF graph and write the closure.
    Infer {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        characteristics: PathBuf,
        /// Also apply rdfs:subPropertyOf and owl:inverseOf axioms found in the data.
        #[arg(long)]
        use_data_axioms: bool,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value = "turtle")]
        format: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run paired queries over a dataset and compare the two forms.
    Bench {
        /// Benchmark spec (TOML); the bundled one when omitted.
        spec: Option<PathBuf>,
        #[arg(long)]
        repetitions: Option<usize>,
        /// Evaluate pairs concurrently (timings then interfere).
        #[arg(long)]
        parallel: bool,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print JSON on stdout instead of the table.
        #[arg(long)]
        print_json: bool,
    },
    /// Evaluate a basic graph pattern query and print tab-separated results.
    Query {
        /// RDF files (.ttl, .nt) or STEP files (.ifc), converted in mode `both`.
        #[arg(required = true)]
        data: Vec<PathBuf>,
        /// Query file.
        #[arg(short, long, conflicts_with = "text")]
        query: Option<PathBuf>,
        /// Query text.
        #[arg(short = 'e', long)]
        text: Option<String>,
        #[arg(long)]
        characteristics: Option<PathBuf>,
        /// Print join order and row counts on stderr.
        #[arg(long)]
        explain: bool,
    },
}

enum Failure {
    Usage(String),
    Input(String),
    Parity,
}

type Res = Result<(), Failure>;

fn input<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(input(path))
}

fn read_schema(path: Option<&Path>) -> Result<ExpressSchema, Failure> {
    match path {
        Some(p) => parse_schema_bytes(&read(p)?).map_err(input(p)),
        None => Ok(bundled::ifc_subset()),
    }
}

fn read_psds(paths: &[PathBuf]) -> Result<Vec<PsdDocument>, Failure> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inner: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(input(p))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x.eq_ignore_ascii_case("xml")))
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    files
        .iter()
        .map(|f| parse_psd_bytes(&read(f)?).map_err(input(f)))
        .collect()
}

fn read_characteristics(path: &Path, ns: &Namespaces) -> Result<Characteristics, Failure> {
    Characteristics::parse(&decode_text(&read(path)?), ns).map_err(input(path))
}

fn read_rdf(path: &Path) -> Result<Graph, Failure> {
    rdf::parse(&decode_text(&read(path)?), Format::from_path(path)).map_err(input(path))
}

fn is_step(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref(),
        Some("ifc" | "stp" | "step")
    )
}

fn report(err: &mut dyn Write, diags: &[Diagnostic], context: &str) {
    for d in diags {
        let _ = writeln!(err, "{context}: {d}");
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Res {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(format!("stdout: {e}"))),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Res {
    let ns = Namespaces::default();
    match cli.command {
        Command::DeriveTbox {
            schema,
            psd_dir,
            characteristics,
            format,
            output,
        } => {
            let s = read_schema(Some(&schema))?;
            let psds = match psd_dir {
                Some(d) => read_psds(&[d])?,
                None => Vec::new(),
            };
            let mut forged = build_tbox(Some(&s), &psds, &ns);
            if let Some(c) = characteristics {
                read_characteristics(&c, &ns)?.apply(&mut forged.graph);
            }
            report(err, &forged.diagnostics, "derive-tbox");
            emit(
                out,
                output.as_deref(),
                &rdf::serialize(&forged.graph, format.into()),
            )
        }
        Command::DerivePsets {
            inputs,
            format,
            output,
        } => {
            let docs = read_psds(&inputs)?;
            let forged = Forged::merge(docs.iter().map(|d| map_psd(d, &ns)));
            let mut graph = forged.graph;
            ns.register_standard_prefixes(&mut graph);
            report(err, &forged.diagnostics, "derive-psets");
            emit(
                out,
                output.as_deref(),
                &rdf::serialize(&graph, format.into()),
            )
        }
        Command::Convert {
            model,
            schema,
            psd_dir,
            mode,
            format,
            base,
            always_value_nodes,
            no_flatten,
            with_tbox,
            output,
        } => {
            let s = read_schema(schema.as_deref())?;
            let psds = match psd_dir {
                Some(d) => read_psds(&[d])?,
                None => bundled::psd_documents(),
            };
            let m = parse_spf_bytes(&read(&model)?).map_err(input(&model))?;
            report(err, &m.warnings, "convert");
            let tbox = build_tbox(Some(&s), &psds, &ns);
            let cfg = ConversionConfig {
                mode: mode.into(),
                base,
                flatten_fixed_lists: !no_flatten,
                value_node_policy: if always_value_nodes {
                    ValueNodePolicy::AlwaysNode
                } else {
                    ValueNodePolicy::LiteralUnlessUnit
                },
                namespaces: ns.clone(),
            };
            let conv = convert(&m, &s, &tbox.graph, &cfg);
            report(err, &conv.diagnostics, "convert");
            let mut graph = conv.graph;
            graph.extend(&conv.minted);
            if with_tbox {
                graph.extend(&tbox.graph);
            }
            emit(
                out,
                output.as_deref(),
                &rdf::serialize(&graph, format.into()),
            )
        }
        Command::Infer {
            inputs,
            characteristics,
            use_data_axioms,
            budget,
            format,
            output,
        } => {
            let ch = read_characteristics(&characteristics, &ns)?;
            let mut store = Store::new();
            let mut prefixes = Graph::new();
            for p in &inputs {
                let g = read_rdf(p)?;
                for (k, v) in g.prefixes() {
                    let _ = prefixes.register_prefix(k, v.as_str());
                }
                store.load(&g);
            }
            let mut rules = Rules::from(&ch);
            rules.from_store = use_data_axioms;
            if let Some(b) = budget {
                rules.budget = b;
            }
            match store.materialize(&rules) {
                Ok(r) => {
                    let _ = writeln!(
                        err,
                        "infer: {} triples added in {} rounds",
                        r.added, r.rounds
                    );
                }
                Err(e) => {
                    let _ = writeln!(err, "infer: warning: {e}");
                }
            }
            let mut graph = store.to_graph();
            for (k, v) in prefixes.prefixes() {
                let _ = graph.register_prefix(k, v.as_str());
            }
            emit(
                out,
                output.as_deref(),
                &rdf::serialize(&graph, format.into()),
            )
        }
        Command::Bench {
            spec,
            repetitions,
            parallel,
            json,
            print_json,
        } => {
            let load = match &spec {
                Some(p) => BenchSpec::load(p),
                None => Ok(bundled::bench_spec(&ns)),
            };
            let mut spec = load.map_err(|e| {
                if e.is_usage() {
                    Failure::Usage(e.to_string())
                } else {
                    Failure::Input(e.to_string())
                }
            })?;
            if let Some(r) = repetitions {
                if r == 0 {
                    return Err(Failure::Usage("--repetitions must be at least 1".into()));
                }
                spec.repetitions = r;
            }
            let prepared = spec
                .prepare(&ns)
                .map_err(|e| Failure::Input(e.to_string()))?;
            report(err, &prepared.diagnostics, "bench");
            let rep = run_bench(&spec, &prepared, parallel);
            if let Some(p) = &json {
                std::fs::write(p, rep.to_json()).map_err(input(p))?;
            }
            let text = if print_json {
                rep.to_json() + "\n"
            } else {
                rep.to_table()
            };
            emit(out, None, &text)?;
            if rep.all_passed() {
                Ok(())
            } else {
                Err(Failure::Parity)
            }
        }
        Command::Query {
            data,
            query,
            text,
            characteristics,
            explain,
        } => {
            let q_text = match (query, text) {
                (Some(p), None) => decode_text(&read(&p)?),
                (None, Some(t)) => t,
                _ => {
                    return Err(Failure::Usage(
                        "give a query with --query FILE or -e TEXT".into(),
                    ))
                }
            };
            let q = parse_query(&q_text).map_err(|e| Failure::Input(format!("query: {e}")))?;
            let mut store = Store::new();
            let mut needs_tbox = false;
            for p in &data {
                if is_step(p) {
                    let m = parse_spf_bytes(&read(p)?).map_err(input(p))?;
                    report(err, &m.warnings, "query");
                    let tbox = bundled::tbox(&ns);
                    let conv = convert(
                        &m,
                        &bundled::ifc_subset(),
                        &tbox.graph,
                        &ConversionConfig::default(),
                    );
                    report(err, &conv.diagnostics, "query");
                    store.load(&conv.graph);
                    needs_tbox = true;
                } else {
                    store.load(&read_rdf(p)?);
                }
            }
            if needs_tbox {
                store.load(&bundled::tbox(&ns).graph);
            }
            if let Some(c) = characteristics {
                if let Err(e) = store.materialize(&Rules::from(&read_characteristics(&c, &ns)?)) {
                    let _ = writeln!(err, "query: warning: {e}");
                }
            }
            let r = evaluate(&store, &q);
            for w in &r.warnings {
                let _ = writeln!(err, "query: warning: {w}");
            }
            if explain {
                let _ = writeln!(
                    err,
                    "query: {} solutions, join order {:?}, {} intermediate rows, {:.3} ms",
                    r.solutions.len(),
                    r.join_order,
                    r.intermediate_rows,
                    r.wall_time.as_secs_f64() * 1e3
                );
            }
            emit(out, None, &r.to_tsv())
        }
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Parity) => {
            let _ = writeln!(
                err,
                "error: some query pairs disagree or miss their expected count"
            );
            3
        }
    }
}

pub fn run() -> ExitCode {
    let code = run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
