//! Materialize the transitive predecessor relation over a chain of tasks.

use ifcwod::abox::{convert, ConversionConfig, Mode};
use ifcwod::bundled;
use ifcwod::sparql::{evaluate, parse_query};
use ifcwod::store::{Rules, Store};
use ifcwod::synth::{generate_synthetic, SynthParams};
use ifcwod::tbox::Characteristics;
use ifcwod::vocab::Namespaces;

const PAIRS: &str = "PREFIX ifcwod: <http://buildingsmart.org/ontology/ifcwod#>
SELECT ?a ?b WHERE { ?a ifcwod:isPredecessorTo_IfcProcess ?b }";

fn main() {
    let ns = Namespaces::default();
    let n = 4;
    let synth = generate_synthetic(&SynthParams {
        processes: n,
        ..SynthParams::empty(3)
    });
    let tbox = bundled::tbox(&ns);
    let conv = convert(
        &synth.model,
        &bundled::ifc_subset(),
        &tbox.graph,
        &ConversionConfig::with_mode(Mode::Ifcwod),
    );
    let mut store = Store::from_graph(&conv.graph);
    let q = parse_query(PAIRS).unwrap();
    println!("before: {} pairs", evaluate(&store, &q).solutions.len());

    let ch = Characteristics::parse(bundled::CHARACTERISTICS, &ns).unwrap();
    let report = store
        .materialize(&Rules::from(&ch))
        .expect("small closure fits the budget");
    let after = evaluate(&store, &q);
    println!(
        "after: {} pairs ({} triples added in {} rounds, expected n(n-1)/2 = {})",
        after.solutions.len(),
        report.added,
        report.rounds,
        n * (n - 1) / 2
    );
    print!("{}", after.to_tsv());
}
