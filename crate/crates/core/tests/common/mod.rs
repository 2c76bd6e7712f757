#![allow(dead_code)]

use std::path::PathBuf;

use gentle_core::dsl::{parse_bound_quiver, parse_string};
use gentle_core::quiver::BoundQuiver;
use gentle_core::walks::StringWord;

pub const FIXTURES: [&str; 7] =
    ["a5-two-rel", "kron-bridge", "a5-one-rel", "double-a5", "fan", "pinwheel-9", "pinwheel-ext"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(format!("{name}.gq"))
}

pub fn golden_path(name: &str) -> PathBuf {
    fixture_dir().join("golden").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> BoundQuiver {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_bound_quiver(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn word(bq: &BoundQuiver, text: &str) -> StringWord {
    parse_string(bq, text).unwrap_or_else(|e| panic!("{text}: {e}"))
}
