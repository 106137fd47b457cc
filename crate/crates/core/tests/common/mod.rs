#![allow(dead_code)]

use fairgame_core::{parse_arena, random_arena, Arena, GenParams, Owner};

pub fn fixture(name: &str) -> Arena {
    let path = format!("{}/../../arenas/{name}.arena", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_arena(&text).unwrap()
}

const DENSITIES: [f64; 3] = [0.3, 0.45, 0.6];

fn params(seed: u64, max_nodes: usize, max_weight: i64, fair: Option<Owner>) -> GenParams {
    GenParams {
        nodes: 1 + (seed as usize % max_nodes),
        max_weight,
        fair,
        density: DENSITIES[(seed / max_nodes as u64) as usize % DENSITIES.len()],
        seed,
    }
}

/// The first `count` seeded arenas with fair edges on `side`.
pub fn fair_corpus(side: Owner, count: usize, max_nodes: usize, max_weight: i64) -> Vec<Arena> {
    (0u64..)
        .map(|seed| random_arena(&params(seed, max_nodes, max_weight, Some(side))))
        .filter(Arena::has_fair_edges)
        .take(count)
        .collect()
}

/// `count` seeded arenas without fair edges.
pub fn regular_corpus(count: usize, max_nodes: usize, max_weight: i64) -> Vec<Arena> {
    (0..count as u64).map(|seed| random_arena(&params(seed, max_nodes, max_weight, None))).collect()
}
