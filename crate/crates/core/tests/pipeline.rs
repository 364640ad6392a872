use ifcwod::abox::{convert, ConversionConfig, Mode};
use ifcwod::bundled;
use ifcwod::rdf::{self, Format};
use ifcwod::sparql::{evaluate, parse_query};
use ifcwod::step::parse_spf;
use ifcwod::store::Store;
use ifcwod::synth::{generate_synthetic, SynthParams};
use ifcwod::vocab::Namespaces;

#[test]
fn ten_thousand_sequence_relationships() {
    let n = 10_001;
    let ns = Namespaces::default();
    let synth = generate_synthetic(&SynthParams {
        processes: n,
        ..SynthParams::empty(2)
    });
    let conv = convert(
        &synth.model,
        &bundled::ifc_subset(),
        &bundled::tbox(&ns).graph,
        &ConversionConfig::with_mode(Mode::Both),
    );
    assert!(
        conv.diagnostics.is_empty(),
        "{:?}",
        &conv.diagnostics[..3.min(conv.diagnostics.len())]
    );
    let store = Store::from_graph(&conv.graph);
    let a = evaluate(
        &store,
        &parse_query(bundled::query("predecessor_ifcowl").unwrap()).unwrap(),
    );
    let b = evaluate(
        &store,
        &parse_query(bundled::query("predecessor_ifcwod").unwrap()).unwrap(),
    );
    assert_eq!(a.solutions.len(), n - 1);
    assert_eq!(a.sorted_solutions(), b.sorted_solutions());
    assert!(b.intermediate_rows < a.intermediate_rows);
}

#[test]
fn synthetic_model_survives_step_round_trip() {
    let synth = generate_synthetic(&SynthParams {
        walls: 20,
        external_walls: 5,
        doors: 6,
        doors_with_reference: 2,
        spaces: 8,
        processes: 4,
        ..SynthParams::default()
    });
    let text = synth.model.to_spf();
    let back = parse_spf(&text).unwrap();
    assert_eq!(back.to_spf(), text);

    let ns = Namespaces::default();
    let tbox = bundled::tbox(&ns);
    let schema = bundled::ifc_subset();
    let cfg = ConversionConfig::default();
    let g1 = convert(&synth.model, &schema, &tbox.graph, &cfg).graph;
    let g2 = convert(&back, &schema, &tbox.graph, &cfg).graph;
    assert!(g1.is_isomorphic(&g2));
    let reparsed = rdf::parse(&rdf::serialize(&g1, Format::Turtle), Format::Turtle).unwrap();
    assert!(reparsed.is_isomorphic(&g1));
}

#[test]
fn modes_partition_the_output() {
    let ns = Namespaces::default();
    let model = bundled::wall_excerpt();
    let schema = bundled::ifc_subset();
    let tbox = bundled::tbox(&ns);
    let run = |m| {
        convert(
            &model,
            &schema,
            &tbox.graph,
            &ConversionConfig::with_mode(m),
        )
        .graph
    };
    let (owl, wod, both) = (run(Mode::Ifcowl), run(Mode::Ifcwod), run(Mode::Both));
    for t in owl.iter().chain(wod.iter()) {
        assert!(both.contains(t), "{t}");
    }
    for t in both.iter() {
        assert!(owl.contains(t) || wod.contains(t), "{t}");
    }
}
