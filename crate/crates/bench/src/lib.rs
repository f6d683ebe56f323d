//! Shared inputs for the benchmarks.

use scff_core::hypergraph::{gen_disjoint, gen_grid, gen_school};
use scff_core::Hypergraph;

/// Twelve disjoint edges of three items.
pub fn twelve_triples() -> Hypergraph {
    gen_disjoint(12, 3).expect("valid parameters")
}

/// Four periods of thirty courses with thirty students each.
pub fn school() -> Hypergraph {
    gen_school(4, 30, 30, 1).expect("valid parameters")
}

/// Every 3x3 window of a square grid.
pub fn grid(side: usize) -> Hypergraph {
    gen_grid(side, 3).expect("valid parameters")
}

/// `m` disjoint edges of `k` items.
pub fn partition(m: usize, k: usize) -> Hypergraph {
    gen_disjoint(m, k).expect("valid parameters")
}
