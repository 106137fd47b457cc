//! Seeded random arenas for tests, benchmarks and the `gen` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arena::{Arena, ArenaBuilder, NodeId, Owner};

/// Probability that an edge leaving a node on the fair side is fair.
pub const FAIR_EDGE_PROBABILITY: f64 = 0.35;

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub nodes: usize,
    pub max_weight: i64,
    pub fair: Option<Owner>,
    pub density: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { nodes: 4, max_weight: 3, fair: None, density: 0.4, seed: 0 }
    }
}

/// Draws an arena with nodes `q0..q{n-1}`.
///
/// Every ordered pair (self-loops included) becomes an edge with probability
/// `density`; nodes left without successors get one uniformly random edge.
/// Weights are uniform in `[-max_weight, max_weight]`.
pub fn random_arena(p: &GenParams) -> Arena {
    assert!(p.nodes > 0, "an arena needs at least one node");
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let w = p.max_weight.abs();
    let density = p.density.clamp(0.0, 1.0);
    let mut b = ArenaBuilder::new();
    let mut owner_of = Vec::with_capacity(p.nodes);
    let ids: Vec<NodeId> = (0..p.nodes)
        .map(|i| {
            let owner = if rng.gen_bool(0.5) { Owner::P1 } else { Owner::P2 };
            owner_of.push(owner);
            b.add_node(&format!("q{i}"), owner).expect("generated names are unique")
        })
        .collect();
    for (i, &src) in ids.iter().enumerate() {
        let mut targets: Vec<usize> = (0..p.nodes).filter(|_| rng.gen_bool(density)).collect();
        if targets.is_empty() {
            targets.push(rng.gen_range(0..p.nodes));
        }
        for j in targets {
            let weight = rng.gen_range(-w..=w);
            let fair = p.fair == Some(owner_of[i]) && rng.gen_bool(FAIR_EDGE_PROBABILITY);
            b.add_edge(src, ids[j], weight, fair).expect("generated edges are distinct");
        }
    }
    b.build().expect("generated arenas are valid")
}
