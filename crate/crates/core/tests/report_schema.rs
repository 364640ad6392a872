use ifcwod::bench::run_bench;
use ifcwod::bundled;
use ifcwod::synth::SynthParams;
use ifcwod::vocab::Namespaces;

fn schema() -> serde_json::Value {
    serde_json::from_str(bundled::REPORT_SCHEMA).unwrap()
}

#[test]
fn bench_report_matches_schema() {
    let ns = Namespaces::default();
    let mut spec = bundled::bench_spec(&ns);
    spec.repetitions = 2;
    spec.source = ifcwod::bench::DataSource::Synthetic(SynthParams {
        walls: 30,
        external_walls: 7,
        doors: 10,
        doors_with_reference: 4,
        spaces: 12,
        processes: 6,
        ..SynthParams::default()
    });
    let prepared = spec.prepare(&ns).unwrap();
    for parallel in [false, true] {
        let report = run_bench(&spec, &prepared, parallel);
        assert!(report.all_passed(), "{}", report.to_table());
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert!(jsonschema::is_valid(&schema(), &json), "{json:#}");
    }
}

#[test]
fn empty_report_matches_schema() {
    let ns = Namespaces::default();
    let mut spec = bundled::bench_spec(&ns);
    spec.pairs.clear();
    spec.source = ifcwod::bench::DataSource::Synthetic(SynthParams::empty(1));
    let report = run_bench(&spec, &spec.prepare(&ns).unwrap(), false);
    assert_eq!(report.summary.pairs, 0);
    assert!(report.all_passed());
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert!(jsonschema::is_valid(&schema(), &json));
}

#[test]
fn schema_rejects_malformed_reports() {
    let bad = serde_json::json!({ "instances": -1, "pairs": [] });
    assert!(!jsonschema::is_valid(&schema(), &bad));
}
