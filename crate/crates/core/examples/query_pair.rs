//! Ask for process predecessors in both shapes over a small synthetic
//! model and show that the answers agree.

use ifcwod::abox::{convert, ConversionConfig};
use ifcwod::bundled;
use ifcwod::sparql::{evaluate, parse_query};
use ifcwod::store::Store;
use ifcwod::synth::{generate_synthetic, SynthParams};
use ifcwod::vocab::Namespaces;

fn main() {
    let ns = Namespaces::default();
    let synth = generate_synthetic(&SynthParams {
        processes: 6,
        ..SynthParams::empty(1)
    });
    let tbox = bundled::tbox(&ns);
    let conv = convert(
        &synth.model,
        &bundled::ifc_subset(),
        &tbox.graph,
        &ConversionConfig::default(),
    );
    let store = Store::from_graph(&conv.graph);

    let mut answers = Vec::new();
    for name in ["predecessor_ifcowl", "predecessor_ifcwod"] {
        let text = bundled::query(name).unwrap();
        let q = parse_query(text).expect("bundled query parses");
        let r = evaluate(&store, &q);
        println!(
            "{name}: {} patterns, {} intermediate rows",
            q.pattern_count(),
            r.intermediate_rows
        );
        println!("{text}");
        print!("{}", r.to_tsv());
        answers.push(r.sorted_solutions());
        println!();
    }
    println!("same answers: {}", answers[0] == answers[1]);
}
