//! Shared workloads for the benchmarks and the smoke test.

use fairgame_core::{random_arena, Arena, GenParams, Owner};

/// Random arena with `nodes` nodes, weights in `[-max_weight, max_weight]`
/// and about eight successors per node.
pub fn workload(nodes: usize, max_weight: i64, fair: Option<Owner>, seed: u64) -> Arena {
    let density = (8.0 / nodes as f64).min(1.0);
    random_arena(&GenParams { nodes, max_weight, fair, density, seed })
}
