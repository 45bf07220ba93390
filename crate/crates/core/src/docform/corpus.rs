//! Theories and documents shipped with the crate.

use super::ast::{Library, TheorySpec};
use super::parser::parse_theory;

pub const MINI_HF_SRC: &str = include_str!("../../fixtures/theories/mini_hf.pfgt");
pub const MINI_HOTG_SRC: &str = include_str!("../../fixtures/theories/mini_hotg.pfgt");
pub const CATEGORIES_SRC: &str = include_str!("../../fixtures/docs/hotg/categories.pfgd");

/// Small proof documents, by name.
pub const PROOF_DOCS: &[(&str, &str)] = &[
    ("p01_identity", include_str!("../../fixtures/docs/proofs/p01_identity.pfgd")),
    ("p02_weaken", include_str!("../../fixtures/docs/proofs/p02_weaken.pfgd")),
    ("p03_distribute", include_str!("../../fixtures/docs/proofs/p03_distribute.pfgd")),
    ("p04_compose", include_str!("../../fixtures/docs/proofs/p04_compose.pfgd")),
    ("p05_and", include_str!("../../fixtures/docs/proofs/p05_and.pfgd")),
    ("p06_and_comm", include_str!("../../fixtures/docs/proofs/p06_and_comm.pfgd")),
    ("p07_or", include_str!("../../fixtures/docs/proofs/p07_or.pfgd")),
    ("p08_explosion", include_str!("../../fixtures/docs/proofs/p08_explosion.pfgd")),
    ("p09_double_neg", include_str!("../../fixtures/docs/proofs/p09_double_neg.pfgd")),
    ("p10_contrapositive", include_str!("../../fixtures/docs/proofs/p10_contrapositive.pfgd")),
    ("p11_eq", include_str!("../../fixtures/docs/proofs/p11_eq.pfgd")),
    ("p12_ex", include_str!("../../fixtures/docs/proofs/p12_ex.pfgd")),
    ("p13_empty", include_str!("../../fixtures/docs/proofs/p13_empty.pfgd")),
    ("p14_refute", include_str!("../../fixtures/docs/proofs/p14_refute.pfgd")),
    ("p15_funext", include_str!("../../fixtures/docs/proofs/p15_funext.pfgd")),
    ("p16_subset", include_str!("../../fixtures/docs/proofs/p16_subset.pfgd")),
    ("p17_power", include_str!("../../fixtures/docs/proofs/p17_power.pfgd")),
    ("p18_hotg_pack", include_str!("../../fixtures/docs/proofs/p18_hotg_pack.pfgd")),
    ("p19_hotg_beta", include_str!("../../fixtures/docs/proofs/p19_hotg_beta.pfgd")),
    ("p20_induction", include_str!("../../fixtures/docs/proofs/p20_induction.pfgd")),
];

pub fn mini_hf() -> TheorySpec {
    parse_theory(MINI_HF_SRC).expect("shipped theory parses")
}

pub fn mini_hotg() -> TheorySpec {
    parse_theory(MINI_HOTG_SRC).expect("shipped theory parses")
}

/// A library holding both shipped theories.
pub fn library() -> Library {
    let mut lib = Library::new();
    lib.insert(mini_hf()).expect("shipped theory checks");
    lib.insert(mini_hotg()).expect("shipped theory checks");
    lib
}
