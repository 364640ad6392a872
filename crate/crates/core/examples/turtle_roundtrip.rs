//! Serialize the converted wall excerpt as Turtle and N-Triples, parse both
//! back and compare the graphs.

use ifcwod::abox::{convert, ConversionConfig, ValueNodePolicy};
use ifcwod::bundled;
use ifcwod::rdf::{parse, serialize, Format};
use ifcwod::vocab::Namespaces;

fn main() {
    let ns = Namespaces::default();
    let cfg = ConversionConfig {
        value_node_policy: ValueNodePolicy::AlwaysNode,
        ..ConversionConfig::default()
    };
    let conv = convert(
        &bundled::wall_excerpt(),
        &bundled::ifc_subset(),
        &bundled::tbox(&ns).graph,
        &cfg,
    );
    for format in [Format::Turtle, Format::NTriples] {
        let text = serialize(&conv.graph, format);
        let back = parse(&text, format).expect("own output parses");
        println!(
            "{format:?}: {} bytes, {} triples, isomorphic: {}",
            text.len(),
            back.len(),
            back.is_isomorphic(&conv.graph)
        );
    }
}
