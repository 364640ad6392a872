//! Count the triples spent on one boolean property per wall, as property
//! instances versus as a direct assertion.

use ifcwod::abox::{convert, ConversionConfig, Mode};
use ifcwod::bundled;
use ifcwod::synth::{generate_synthetic, SynthParams};
use ifcwod::vocab::Namespaces;

fn main() {
    let ns = Namespaces::default();
    let k = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50);
    let synth = generate_synthetic(&SynthParams {
        walls: k,
        external_walls: k / 2,
        ..SynthParams::empty(5)
    });
    let schema = bundled::ifc_subset();
    let tbox = bundled::tbox(&ns);
    let owl = convert(
        &synth.model,
        &schema,
        &tbox.graph,
        &ConversionConfig::with_mode(Mode::Ifcowl),
    );
    let wod = convert(
        &synth.model,
        &schema,
        &tbox.graph,
        &ConversionConfig::with_mode(Mode::Ifcwod),
    );

    let single = ns.ifcowl("IfcPropertySingleValue");
    let prop_nodes: Vec<_> = owl
        .graph
        .iter()
        .filter(|t| t.object().as_iri() == Some(&single))
        .map(|t| t.subject().clone())
        .collect();
    let about_props = owl
        .graph
        .iter()
        .filter(|t| prop_nodes.contains(t.subject()) || prop_nodes.contains(t.object()))
        .count();
    let is_external = ns.pset_namespace("Pset_WallCommon") + "isExternal";
    let direct = wod
        .graph
        .iter()
        .filter(|t| t.predicate().as_str() == is_external)
        .count();
    println!("walls: {k}");
    println!(
        "baseline: {} property instances, {about_props} triples touching them",
        prop_nodes.len()
    );
    println!("direct:   {direct} isExternal assertions");
}
