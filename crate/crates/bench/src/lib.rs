//! Fixtures shared by the criterion benchmarks.

use mret_core::{gen_random_sc, Digraph, Schedule};

/// A strongly connected digraph with `nodes` nodes and `edges` edges, and a
/// pseudo-random schedule of its edges derived from the same seed.
pub fn random_instance(nodes: usize, edges: usize, seed: u64) -> (Digraph, Schedule) {
    let g = gen_random_sc(nodes, edges - nodes, seed).expect("valid sizes");
    let m = g.edge_count();
    // multiplicative stride permutation: gcd(stride, m) = 1 gives a permutation
    let mut stride = (m as u64 / 2 + 1) | 1;
    while gcd(stride, m as u64) != 1 {
        stride += 2;
    }
    let order = (0..m as u64)
        .map(|i| ((i * stride + seed) % m as u64) as usize)
        .collect();
    (g, Schedule::new(order, m).expect("stride permutation"))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
