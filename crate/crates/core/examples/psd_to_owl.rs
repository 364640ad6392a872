//! Map a property set definition to OWL. Pass a PSD XML file, or run
//! without arguments for the bundled stack terminal set.

use ifcwod::bundled;
use ifcwod::psd::{parse_psd, parse_psd_bytes};
use ifcwod::rdf::{serialize, Format};
use ifcwod::tbox::map_psd;
use ifcwod::vocab::Namespaces;

fn main() {
    let doc = match std::env::args_os().nth(1) {
        Some(path) => {
            parse_psd_bytes(&std::fs::read(&path).expect("readable file")).expect("valid PSD")
        }
        None => parse_psd(bundled::psd("Pset_StackTerminalTypeCommon.xml").unwrap()).unwrap(),
    };
    println!("# {} ({} properties)", doc.name, doc.properties.len());
    let forged = map_psd(&doc, &Namespaces::default());
    for d in &forged.diagnostics {
        eprintln!("{d}");
    }
    print!("{}", serialize(&forged.graph, Format::Turtle));
}
