//! Bundled 16-entry experimental table used by tests, docs and the CLI
//! walkthrough.

use crate::dataset::{parse_dataset, Dataset};

/// Raw CSV text of the bundled table.
pub const THRUSTERS_CSV: &str = include_str!("../data/thrusters.csv");

/// Parses the bundled table.
pub fn dataset() -> Dataset {
    parse_dataset(THRUSTERS_CSV).expect("bundled thruster table is valid")
}
