//! Read the process/sequence declarations, list the inverse tuples of
//! IfcProcess and print the object properties derived from them.

use ifcwod::bundled;
use ifcwod::express::collect_inverse_tuples;
use ifcwod::rdf::{serialize, Format};
use ifcwod::tbox::derive_relationship_properties;
use ifcwod::vocab::Namespaces;

fn main() {
    let schema = bundled::process_sequence();
    let tuples = collect_inverse_tuples(&schema, "IfcProcess").expect("IfcProcess is declared");
    println!("inverse tuples of IfcProcess:");
    for t in tuples.tuples.values() {
        println!(
            "  ({}, {})  via {}.{} FOR {}",
            t.property, t.range, t.relationship, t.for_attribute, t.inverse_name
        );
    }
    let forged = derive_relationship_properties(&schema, &Namespaces::default());
    for d in &forged.diagnostics {
        eprintln!("{d}");
    }
    println!("\n{}", serialize(&forged.graph, Format::Turtle));
}
