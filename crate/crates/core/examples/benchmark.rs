//! Run the bundled paired-query benchmark, or the spec given as argument.

use ifcwod::bench::{run_bench, BenchSpec};
use ifcwod::bundled;
use ifcwod::vocab::Namespaces;

fn main() {
    let ns = Namespaces::default();
    let mut spec = match std::env::args_os().nth(1) {
        Some(p) => BenchSpec::load(p.as_ref()).unwrap_or_else(|e| panic!("{e}")),
        None => bundled::bench_spec(&ns),
    };
    spec.repetitions = 5;
    let prepared = spec.prepare(&ns).unwrap_or_else(|e| panic!("{e}"));
    println!(
        "{} instances, {} triples",
        prepared.instances,
        prepared.store.len()
    );
    let report = run_bench(&spec, &prepared, false);
    print!("{}", report.to_table());
}
