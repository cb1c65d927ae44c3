//! Shared fixtures for the criterion benches.

use sinica::harness::{gen_sources, mix, reference_mixing_matrix, reference_source_specs};
use sinica::{preprocess, SignalMatrix};

/// Reference sources and their mixture at `n` samples.
pub fn reference_fixture(n: usize) -> (SignalMatrix, SignalMatrix) {
    let sources = gen_sources(&reference_source_specs(), n).expect("reference sources");
    let mixed = mix(&sources, &reference_mixing_matrix()).expect("reference mixing");
    (sources, mixed)
}

/// Whitened reference mixture.
pub fn whitened_fixture(n: usize) -> SignalMatrix {
    let (_, mixed) = reference_fixture(n);
    preprocess::whiten(&mixed).expect("full-rank mixture").0
}
