//! Convert the bundled wall excerpt and print the triples about one wall,
//! first as the baseline model, then with direct properties added.

use ifcwod::abox::{convert, ConversionConfig, Mode};
use ifcwod::bundled;
use ifcwod::rdf::{serialize, Format, Graph, Term};
use ifcwod::vocab::Namespaces;

fn main() {
    let ns = Namespaces::default();
    let model = bundled::wall_excerpt();
    let schema = bundled::ifc_subset();
    let tbox = bundled::tbox(&ns);

    for mode in [Mode::Ifcowl, Mode::Both] {
        let conv = convert(
            &model,
            &schema,
            &tbox.graph,
            &ConversionConfig::with_mode(mode),
        );
        let wall = Term::iri("http://example.org/ifc/IfcWallStandardCase_3060").unwrap();
        let mut about = Graph::new();
        for (k, v) in conv.graph.prefixes() {
            about.register_prefix(k, v.as_str()).unwrap();
        }
        for t in conv
            .graph
            .iter()
            .filter(|t| t.subject() == &wall || t.object() == &wall)
        {
            about.insert(t.clone());
        }
        println!(
            "# mode {mode}: {} triples in total, {} about the wall",
            conv.graph.len(),
            about.len()
        );
        println!("{}", serialize(&about, Format::Turtle));
        for d in &conv.diagnostics {
            eprintln!("{d}");
        }
    }
}
