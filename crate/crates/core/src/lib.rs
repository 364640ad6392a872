pub mod abox;
pub mod bench;
pub mod bundled;
pub mod cli;
pub mod diag;
pub mod express;
pub mod psd;
pub mod rdf;
pub mod sparql;
pub mod step;
pub mod store;
pub mod synth;
pub mod tbox;
pub mod vocab;
