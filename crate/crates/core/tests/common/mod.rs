#![allow(dead_code)]

pub mod criteria;
pub mod gen;
pub mod mutate;
pub mod oracle;

use std::path::PathBuf;

use formalchain::docform::{corpus, parse_doc, Document};
use formalchain::simnet::Scenario;

pub const SCENARIOS: &[&str] = &["explorer_graph", "reorg", "tie", "lifecycle", "disproof", "bounty_views"];

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn scenario(name: &str) -> Scenario {
    let text = std::fs::read_to_string(fixture(&format!("scenarios/{name}.json"))).unwrap();
    Scenario::from_json(&text).unwrap()
}

pub fn doc(name: &str) -> Document {
    let src = corpus::PROOF_DOCS.iter().find(|(n, _)| *n == name).unwrap().1;
    parse_doc(src, &corpus::library()).unwrap()
}
