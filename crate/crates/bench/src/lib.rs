//! Inputs shared by the benchmarks in `benches/`.

use dbr_core::{generate, FamilySpec, Graph};

pub fn fixture(name: &str, params: &[usize]) -> Graph {
    generate(&FamilySpec::new(name, params)).expect("benchmark fixture generates")
}
