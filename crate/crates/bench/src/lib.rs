//! Shared fixtures for the engine benchmarks.

use innerrate_core::toric::{named_ideals, random_corpus};
use innerrate_core::MonomialIdeal;

/// The benchmark corpus: named ideals plus a fixed pseudo-random sample.
pub fn corpus() -> Vec<MonomialIdeal> {
    let mut out = named_ideals();
    out.extend(random_corpus(20, 6, 2024));
    out
}
