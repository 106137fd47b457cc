//! Gadget arenas that turn fair games into regular ones.
//!
//! Every fair node keeps its id and becomes the root of a small subgame; the
//! gadget nodes are appended after the original nodes, gadget by gadget in
//! ascending order of the fair node. Nodes without fair edges are copied
//! unchanged (weights scaled for the energy gadget).

use std::collections::{BTreeMap, HashSet};

use crate::arena::{Arena, ArenaBuilder, NodeId, Owner};
use crate::energy::WinRegions;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// Mean-payoff, fairness on player 1.
    FairMp1,
    /// Mean-payoff, fairness on player 2.
    FairMp2,
    /// Energy, fairness on player 1.
    FairEnergy1,
}

impl GadgetKind {
    pub fn side(self) -> Owner {
        match self {
            GadgetKind::FairMp1 | GadgetKind::FairEnergy1 => Owner::P1,
            GadgetKind::FairMp2 => Owner::P2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::FairMp1 => "fair-mp-1",
            GadgetKind::FairMp2 => "fair-mp-2",
            GadgetKind::FairEnergy1 => "fair-energy-1",
        }
    }
}

/// The part of a gadget an edge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchRole {
    /// Edge of a node without fair edges, copied from the original arena.
    Copied,
    /// Root to the left child.
    LeftEntry,
    /// Left child to the fair node and on to the fair successors.
    FairBranch,
    /// Left child to the neutral node and on to all successors (mean-payoff).
    SimulationBranch,
    /// Root to the right child, right child to the escape node, and on to all successors.
    EscapeBranch,
    /// Left child to the value node (energy).
    ValueBranch,
    /// Value node to the penalised node and on to all successors (energy).
    PositiveValue,
    /// Value node to the zero node and on to the fair successors (energy).
    ZeroValue,
}

/// Node ids of the gadget replacing one fair node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FairGadget {
    pub root: NodeId,
    pub left: NodeId,
    pub right: NodeId,
    pub fair: NodeId,
    /// Simulation node for mean-payoff gadgets, value node for the energy gadget.
    pub middle: NodeId,
    /// Penalised and zero nodes of the energy gadget.
    pub positive: Option<NodeId>,
    pub zero: Option<NodeId>,
    pub escape: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMap {
    pub kind: GadgetKind,
    original_count: usize,
    gadget_count: usize,
    roles: Vec<BranchRole>,
    gadgets: BTreeMap<NodeId, FairGadget>,
    weight_scale: i64,
    fair_branch_weight: i64,
    escape_weight: i64,
}

impl GadgetMap {
    /// The original node a gadget node stands for, defined on original nodes only.
    pub fn original_of(&self, q: NodeId) -> Option<NodeId> {
        (q.0 < self.original_count).then_some(q)
    }

    /// Role of the gadget arena edge with the given index in `edges()`.
    pub fn branch_role(&self, edge_index: usize) -> BranchRole {
        self.roles[edge_index]
    }

    pub fn roles(&self) -> &[BranchRole] {
        &self.roles
    }

    pub fn weight_scale(&self) -> i64 {
        self.weight_scale
    }

    pub fn original_count(&self) -> usize {
        self.original_count
    }

    pub fn gadget_count(&self) -> usize {
        self.gadget_count
    }

    pub fn gadget(&self, q: NodeId) -> Option<&FairGadget> {
        self.gadgets.get(&q)
    }

    pub fn gadgets(&self) -> impl Iterator<Item = &FairGadget> + '_ {
        self.gadgets.values()
    }

    /// Weight on the edge into the fair node, in gadget units.
    pub fn fair_branch_weight(&self) -> i64 {
        self.fair_branch_weight
    }

    /// Weight on the edge into the escape node, in gadget units.
    pub fn escape_weight(&self) -> i64 {
        self.escape_weight
    }

    /// Upper bound on gadget arena size for this kind and input size.
    pub fn node_bound(kind: GadgetKind, n: usize) -> usize {
        match kind {
            GadgetKind::FairMp1 | GadgetKind::FairMp2 => 6 * n,
            GadgetKind::FairEnergy1 => 8 * n,
        }
    }

    /// Upper bound on gadget arena weights for this kind and input size.
    pub fn weight_bound(kind: GadgetKind, n: usize, max_weight: i64) -> i128 {
        let n = n as i128;
        let base = n * n * max_weight as i128 + n;
        match kind {
            GadgetKind::FairMp1 | GadgetKind::FairMp2 => base,
            GadgetKind::FairEnergy1 => base * (n + 1),
        }
    }
}

fn check_side(a: &Arena, kind: GadgetKind) -> Result<()> {
    match a.fairness_side() {
        Some(actual) if actual != kind.side() => Err(Error::SideMismatch { requested: kind.side(), actual }),
        _ => Ok(()),
    }
}

struct Names {
    used: HashSet<String>,
}

impl Names {
    fn fresh(&mut self, base: &str, suffix: &str) -> String {
        let mut name = format!("{base}{suffix}");
        while self.used.contains(&name) {
            name.push('\'');
        }
        self.used.insert(name.clone());
        name
    }
}

type AddEdge<'a> = dyn FnMut(&mut ArenaBuilder, NodeId, NodeId, i64, BranchRole) -> Result<()> + 'a;

/// Builds the gadget arena of `kind` for `a`.
pub fn build_gadget(a: &Arena, kind: GadgetKind) -> Result<(Arena, GadgetMap)> {
    check_side(a, kind)?;
    let n = a.node_count() as i64;
    let w = a.max_weight();
    let energy = kind == GadgetKind::FairEnergy1;
    let scale = if energy { n + 1 } else { 1 };
    let mul = |x: i64, y: i64| x.checked_mul(y).ok_or(Error::Overflow);
    let add = |x: i64, y: i64| x.checked_add(y).ok_or(Error::Overflow);
    let fair_mag = mul(add(mul(n, w)?, 1)?, scale)?;
    let esc_mag = mul(add(mul(mul(n, n)?, w)?, n)?, scale)?;
    let (fair_branch_weight, escape_weight) = match kind {
        GadgetKind::FairMp1 | GadgetKind::FairEnergy1 => (fair_mag, -esc_mag),
        GadgetKind::FairMp2 => (-fair_mag, esc_mag),
    };

    let side = kind.side();
    let other = side.opponent();
    let mut b = ArenaBuilder::new();
    let mut names = Names { used: a.nodes().map(|q| a.name(q).to_string()).collect() };
    for q in a.nodes() {
        b.add_node(a.name(q), a.owner(q))?;
    }

    let mut gadgets = BTreeMap::new();
    for q in a.fair_nodes() {
        let base = a.name(q);
        let mut node = |suffix: &str, owner: Owner| b.add_node(&names.fresh(base, suffix), owner);
        let left = node("_l", other)?;
        let right = node("_r", other)?;
        let fair = node("_fair", other)?;
        let middle = node(if energy { "_val" } else { "_sim" }, side)?;
        let (positive, zero) = if energy {
            (Some(node("_pos", side)?), Some(node("_zero", other)?))
        } else {
            (None, None)
        };
        let escape = node("_esc", side)?;
        gadgets.insert(q, FairGadget { root: q, left, right, fair, middle, positive, zero, escape });
    }

    let mut roles = Vec::new();
    let mut edge = |b: &mut ArenaBuilder, src: NodeId, dst: NodeId, weight: i64, role: BranchRole| {
        roles.push(role);
        b.add_edge(src, dst, weight, false)
    };
    for q in a.nodes() {
        match gadgets.get(&q) {
            None => {
                for e in a.out_edges(q) {
                    edge(&mut b, q, e.dst, mul(e.weight, scale)?, BranchRole::Copied)?;
                }
            }
            Some(g) => {
                edge(&mut b, q, g.left, 0, BranchRole::LeftEntry)?;
                edge(&mut b, q, g.right, 0, BranchRole::EscapeBranch)?;
            }
        }
    }
    for g in gadgets.values() {
        let q = g.root;
        let exits = |b: &mut ArenaBuilder,
                     edge: &mut AddEdge,
                     from: NodeId,
                     only_fair: bool,
                     role: BranchRole|
         -> Result<()> {
            for e in a.out_edges(q).filter(|e| e.fair || !only_fair) {
                edge(b, from, e.dst, mul(e.weight, scale)?, role)?;
            }
            Ok(())
        };
        edge(&mut b, g.left, g.fair, fair_branch_weight, BranchRole::FairBranch)?;
        if energy {
            let (pos, zero) = (g.positive.expect("energy gadget"), g.zero.expect("energy gadget"));
            edge(&mut b, g.left, g.middle, 0, BranchRole::ValueBranch)?;
            edge(&mut b, g.middle, pos, -1, BranchRole::PositiveValue)?;
            edge(&mut b, g.middle, zero, 0, BranchRole::ZeroValue)?;
        } else {
            edge(&mut b, g.left, g.middle, 0, BranchRole::SimulationBranch)?;
        }
        edge(&mut b, g.right, g.escape, escape_weight, BranchRole::EscapeBranch)?;
        exits(&mut b, &mut edge, g.fair, true, BranchRole::FairBranch)?;
        if energy {
            exits(&mut b, &mut edge, g.positive.expect("energy gadget"), false, BranchRole::PositiveValue)?;
            exits(&mut b, &mut edge, g.zero.expect("energy gadget"), true, BranchRole::ZeroValue)?;
        } else {
            exits(&mut b, &mut edge, g.middle, false, BranchRole::SimulationBranch)?;
        }
        exits(&mut b, &mut edge, g.escape, false, BranchRole::EscapeBranch)?;
    }

    let gadget_arena = b.build()?;
    let map = GadgetMap {
        kind,
        original_count: a.node_count(),
        gadget_count: gadget_arena.node_count(),
        roles,
        gadgets,
        weight_scale: scale,
        fair_branch_weight,
        escape_weight,
    };
    Ok((gadget_arena, map))
}

/// Restricts regions of the gadget game to the original nodes.
///
/// Credits are converted back to original units with rounding up, values are
/// divided by the weight scale.
pub fn project_regions(r: &WinRegions, m: &GadgetMap) -> Result<WinRegions> {
    let sets = [&r.win1, &r.win2, &r.undetermined];
    let keys = sets.iter().flat_map(|s| s.iter()).chain(r.credit.keys()).chain(r.value.keys());
    if let Some(&q) = keys.into_iter().find(|q| q.0 >= m.gadget_count) {
        return Err(Error::RegionOutOfRange(q));
    }
    let keep = |q: &&NodeId| m.original_of(**q).is_some();
    let scale = m.weight_scale;
    Ok(WinRegions {
        win1: r.win1.iter().filter(keep).copied().collect(),
        win2: r.win2.iter().filter(keep).copied().collect(),
        undetermined: r.undetermined.iter().filter(keep).copied().collect(),
        credit: r
            .credit
            .iter()
            .filter(|(q, _)| keep(q))
            .map(|(&q, &c)| (q, (c + scale - 1).div_euclid(scale)))
            .collect(),
        value: r
            .value
            .iter()
            .filter(|(q, _)| keep(q))
            .map(|(&q, &v)| (q, v / Rational::from(scale)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{parse_arena, validate};
    use crate::energy::solve_energy;
    use crate::generate::{random_arena, GenParams};
    use proptest::prelude::*;

    const FIG1: &str = "arena v1\nnode q p1\nnode p p1\nedge q q 1\nedge q p -4 fair\nedge p q 0\n";
    const FIG3: &str = "arena v1\nnode q p2\nnode r p1\nedge q q -1\nedge q r 0 fair\nedge r r 0\n";

    fn weight_by_name(g: &Arena, src: &str, dst: &str) -> i64 {
        g.weight(g.node_by_name(src).unwrap(), g.node_by_name(dst).unwrap()).unwrap()
    }

    #[test]
    fn fig1_mean_payoff_gadget() {
        let a = parse_arena(FIG1).unwrap();
        let (g, m) = build_gadget(&a, GadgetKind::FairMp1).unwrap();
        assert_eq!(g.node_count(), 7);
        assert_eq!(weight_by_name(&g, "q_l", "q_fair"), 9);
        assert_eq!(weight_by_name(&g, "q_r", "q_esc"), -18);
        assert_eq!(weight_by_name(&g, "q_fair", "p"), -4);
        assert!(g.edge(g.node_by_name("q_fair").unwrap(), NodeId(0)).is_none());
        assert_eq!(weight_by_name(&g, "q_sim", "q"), 1);
        assert_eq!(weight_by_name(&g, "q_esc", "p"), -4);
        assert_eq!(weight_by_name(&g, "p", "q"), 0);
        let owner = |name: &str| g.owner(g.node_by_name(name).unwrap());
        assert_eq!(owner("q"), Owner::P1);
        for name in ["q_l", "q_r", "q_fair"] {
            assert_eq!(owner(name), Owner::P2);
        }
        for name in ["q_sim", "q_esc"] {
            assert_eq!(owner(name), Owner::P1);
        }
        assert_eq!(m.weight_scale(), 1);
        assert!(!g.has_fair_edges());
        let gd = m.gadget(NodeId(0)).unwrap();
        assert_eq!((gd.left, gd.escape), (NodeId(2), NodeId(6)));
    }

    #[test]
    fn fig1_energy_gadget() {
        let a = parse_arena(FIG1).unwrap();
        let (g, m) = build_gadget(&a, GadgetKind::FairEnergy1).unwrap();
        assert_eq!(g.node_count(), 9);
        assert_eq!(m.weight_scale(), 3);
        assert_eq!(weight_by_name(&g, "q_l", "q_fair"), 27);
        assert_eq!(weight_by_name(&g, "q_r", "q_esc"), -54);
        assert_eq!(weight_by_name(&g, "q_val", "q_pos"), -1);
        assert_eq!(weight_by_name(&g, "q_val", "q_zero"), 0);
        assert_eq!(weight_by_name(&g, "q_pos", "q"), 3);
        assert_eq!(weight_by_name(&g, "q_pos", "p"), -12);
        assert_eq!(weight_by_name(&g, "q_zero", "p"), -12);
        assert!(g.edge(g.node_by_name("q_zero").unwrap(), NodeId(0)).is_none());
        assert_eq!(weight_by_name(&g, "p", "q"), 0);
        let owner = |name: &str| g.owner(g.node_by_name(name).unwrap());
        for name in ["q_l", "q_r", "q_fair", "q_zero"] {
            assert_eq!(owner(name), Owner::P2);
        }
        for name in ["q_val", "q_pos", "q_esc"] {
            assert_eq!(owner(name), Owner::P1);
        }
    }

    #[test]
    fn fig3_dual_gadget() {
        let a = parse_arena(FIG3).unwrap();
        let (g, _) = build_gadget(&a, GadgetKind::FairMp2).unwrap();
        assert_eq!(weight_by_name(&g, "q_l", "q_fair"), -3);
        assert_eq!(weight_by_name(&g, "q_r", "q_esc"), 6);
        let owner = |name: &str| g.owner(g.node_by_name(name).unwrap());
        assert_eq!(owner("q_l"), Owner::P1);
        assert_eq!(owner("q_sim"), Owner::P2);
        assert!(matches!(
            build_gadget(&a, GadgetKind::FairMp1),
            Err(Error::SideMismatch { requested: Owner::P1, actual: Owner::P2 })
        ));
        assert!(build_gadget(&parse_arena(FIG1).unwrap(), GadgetKind::FairMp2).is_err());
    }

    #[test]
    fn fairless_arena_is_copied() {
        let a = parse_arena("arena v1\nnode a p1\nnode b p2\nedge a b 2\nedge b a -1\n").unwrap();
        for kind in [GadgetKind::FairMp1, GadgetKind::FairMp2] {
            let (g, m) = build_gadget(&a, kind).unwrap();
            assert_eq!(g, a);
            assert_eq!(m.gadgets().count(), 0);
        }
        let (g, m) = build_gadget(&a, GadgetKind::FairEnergy1).unwrap();
        assert_eq!(g, a.map_weights(|e| Ok(e.weight * 3)).unwrap());
        assert!(m.roles().iter().all(|&r| r == BranchRole::Copied));
    }

    #[test]
    fn name_collisions_get_primes() {
        let text = "arena v1\nnode q p1\nnode q_l p2\nedge q q 0 fair\nedge q_l q 0\n";
        let (g, _) = build_gadget(&parse_arena(text).unwrap(), GadgetKind::FairMp1).unwrap();
        assert!(g.node_by_name("q_l'").is_some());
    }

    #[test]
    fn projection() {
        let a = parse_arena(FIG1).unwrap();
        let (g, m) = build_gadget(&a, GadgetKind::FairEnergy1).unwrap();
        let all = WinRegions::from_win1(g.node_count(), g.nodes());
        assert_eq!(project_regions(&all, &m).unwrap().win1.len(), 2);
        let mut r = WinRegions::from_win1(g.node_count(), []);
        r.credit.insert(NodeId(0), 7);
        assert_eq!(project_regions(&r, &m).unwrap().credit[&NodeId(0)], 3);
        r.win2.insert(NodeId(40));
        assert_eq!(project_regions(&r, &m), Err(Error::RegionOutOfRange(NodeId(40))));
        let solved = solve_energy(&g).regions;
        assert!(project_regions(&solved, &m).unwrap().is_partition(2));
    }

    proptest! {
        #[test]
        fn size_and_weight_bounds(seed in 0u64..100_000, nodes in 1usize..9, w in 0i64..6, p1 in proptest::bool::ANY) {
            let side = if p1 { Owner::P1 } else { Owner::P2 };
            let a = random_arena(&GenParams { nodes, max_weight: w, fair: Some(side), density: 0.4, seed });
            let kinds: &[GadgetKind] = if p1 { &[GadgetKind::FairMp1, GadgetKind::FairEnergy1] } else { &[GadgetKind::FairMp2] };
            for &kind in kinds {
                let (g, m) = build_gadget(&a, kind).unwrap();
                prop_assert!(validate(&g).is_empty());
                prop_assert!(g.node_count() <= GadgetMap::node_bound(kind, nodes));
                prop_assert!(g.max_weight() as i128 <= GadgetMap::weight_bound(kind, nodes, a.max_weight()));
                prop_assert_eq!(m.roles().len(), g.edge_count());
                for q in a.nodes() {
                    prop_assert_eq!(g.owner(q), a.owner(q));
                    prop_assert_eq!(g.name(q), a.name(q));
                }
            }
        }
    }
}
