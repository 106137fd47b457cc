//! Regular energy games with unknown initial credit, solved by small
//! progress measures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::arena::{Arena, Edge, NodeId, Owner};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Partition of the nodes into the two winning regions and the nodes won by
/// neither player, plus optional per-node credits and values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WinRegions {
    pub win1: BTreeSet<NodeId>,
    pub win2: BTreeSet<NodeId>,
    pub undetermined: BTreeSet<NodeId>,
    /// Minimal initial credit, defined on `win1` for energy objectives.
    pub credit: BTreeMap<NodeId, i64>,
    /// Optimal value, filled by the value solvers.
    pub value: BTreeMap<NodeId, Rational>,
}

impl WinRegions {
    /// Regions where `win1` holds the given nodes and everything else is won by player 2.
    pub fn from_win1(n: usize, win1: impl IntoIterator<Item = NodeId>) -> Self {
        let win1: BTreeSet<NodeId> = win1.into_iter().collect();
        let win2 = (0..n).map(NodeId).filter(|q| !win1.contains(q)).collect();
        WinRegions { win1, win2, ..Default::default() }
    }

    pub fn region(&self, player: Owner) -> &BTreeSet<NodeId> {
        match player {
            Owner::P1 => &self.win1,
            Owner::P2 => &self.win2,
        }
    }

    /// Whether the three sets are pairwise disjoint and cover `0..n`.
    pub fn is_partition(&self, n: usize) -> bool {
        let total = self.win1.len() + self.win2.len() + self.undetermined.len();
        let all: BTreeSet<_> = self.win1.iter().chain(&self.win2).chain(&self.undetermined).collect();
        total == n && all.len() == n && all.iter().all(|q| q.0 < n)
    }

    pub fn is_determined(&self) -> bool {
        self.undetermined.is_empty()
    }
}

/// A memoryless strategy: one successor per node of its owner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalStrategy {
    owner: Owner,
    moves: Vec<Option<NodeId>>,
}

impl PositionalStrategy {
    pub fn new(owner: Owner, node_count: usize) -> Self {
        PositionalStrategy { owner, moves: vec![None; node_count] }
    }

    pub fn owner(&self) -> Owner {
        self.owner
    }

    pub fn node_count(&self) -> usize {
        self.moves.len()
    }

    pub fn get(&self, q: NodeId) -> Option<NodeId> {
        self.moves.get(q.0).copied().flatten()
    }

    pub fn set(&mut self, q: NodeId, succ: NodeId) {
        self.moves[q.0] = Some(succ);
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.moves.iter().enumerate().filter_map(|(i, m)| m.map(|s| (NodeId(i), s)))
    }

    /// Checks that every owned node has a move and every move is an edge.
    pub fn check(&self, a: &Arena) -> Result<()> {
        for q in a.nodes().filter(|&q| a.owner(q) == self.owner) {
            let succ = self.get(q).ok_or(Error::IncompleteMachine(q))?;
            if a.edge(q, succ).is_none() {
                return Err(Error::IllegalMove { from: q, to: succ });
            }
        }
        Ok(())
    }
}

/// Least fixpoint of the lifting operator; `None` stands for the top element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressMeasure {
    values: Vec<Option<i64>>,
    cap: i64,
}

impl ProgressMeasure {
    pub fn get(&self, q: NodeId) -> Option<i64> {
        self.values[q.0]
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn values(&self) -> &[Option<i64>] {
        &self.values
    }
}

#[derive(Clone, Debug)]
pub struct EnergySolution {
    pub regions: WinRegions,
    pub p1: PositionalStrategy,
    pub p2: PositionalStrategy,
    pub measure: ProgressMeasure,
}

impl EnergySolution {
    pub fn strategy(&self, player: Owner) -> &PositionalStrategy {
        match player {
            Owner::P1 => &self.p1,
            Owner::P2 => &self.p2,
        }
    }
}

const TOP: i64 = i64::MAX;

fn lift(x: i64, w: i64, cap: i64) -> i64 {
    if x == TOP {
        return TOP;
    }
    let y = (x as i128 - w as i128).max(0);
    if y > cap as i128 {
        TOP
    } else {
        y as i64
    }
}

/// Lifting game on the nodes flagged `active`. The `credit_owner` wants to keep
/// the energy level nonnegative and takes the minimum over successors.
struct Lifting<'a, F: Fn(&Edge) -> i64> {
    arena: &'a Arena,
    credit_owner: Owner,
    weight: F,
    active: &'a [bool],
    cap: i64,
}

impl<F: Fn(&Edge) -> i64> Lifting<'_, F> {
    fn active_edges(&self, q: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.arena.out_edges(q).filter(|e| self.active[e.dst.0])
    }

    fn node_value(&self, q: NodeId, val: &[i64]) -> i64 {
        let lifted = self.active_edges(q).map(|e| lift(val[e.dst.0], (self.weight)(e), self.cap));
        let best = if self.arena.owner(q) == self.credit_owner { lifted.min() } else { lifted.max() };
        best.unwrap_or(TOP)
    }

    fn fixpoint(&self) -> Vec<i64> {
        let n = self.arena.node_count();
        let mut preds = vec![Vec::new(); n];
        for e in self.arena.edges() {
            if self.active[e.src.0] && self.active[e.dst.0] {
                preds[e.dst.0].push(e.src.0);
            }
        }
        let mut val = vec![0i64; n];
        let mut queued = self.active.to_vec();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| self.active[i]).collect();
        while let Some(q) = queue.pop_front() {
            queued[q] = false;
            let new = self.node_value(NodeId(q), &val);
            if new > val[q] {
                val[q] = new;
                for &p in &preds[q] {
                    if !queued[p] && val[p] != TOP {
                        queued[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
        val
    }

    /// Successor realizing the node's value, smallest id on ties.
    fn realizing_move(&self, q: NodeId, val: &[i64]) -> Option<NodeId> {
        let target = val[q.0];
        self.active_edges(q)
            .find(|e| lift(val[e.dst.0], (self.weight)(e), self.cap) == target)
            .map(|e| e.dst)
    }
}

fn credit_cap(nodes: usize, max_weight: i64) -> i64 {
    let cap = nodes as i128 * max_weight.unsigned_abs() as i128;
    cap.min(i64::MAX as i128 / 4) as i64
}

/// Solves the regular energy game; fair edges are treated as ordinary edges.
///
/// Player 1 wins exactly where the progress measure stays below the top
/// element, and the measure is the minimal initial credit. The returned
/// player-2 strategy keeps every cycle negative inside `win2`.
pub fn solve_energy(a: &Arena) -> EnergySolution {
    let n = a.node_count();
    let all = vec![true; n];
    let cap = credit_cap(n, a.max_weight());
    let lifting = Lifting { arena: a, credit_owner: Owner::P1, weight: |e: &Edge| e.weight, active: &all, cap };
    let val = lifting.fixpoint();

    let mut regions = WinRegions::default();
    for q in a.nodes() {
        if val[q.0] == TOP {
            regions.win2.insert(q);
        } else {
            regions.win1.insert(q);
            regions.credit.insert(q, val[q.0]);
        }
    }

    let mut p1 = PositionalStrategy::new(Owner::P1, n);
    let mut p2 = PositionalStrategy::new(Owner::P2, n);
    for q in a.nodes() {
        let smallest = a.successors(q).next().expect("valid arenas have no dead ends");
        let chosen = if val[q.0] == TOP && a.owner(q) == Owner::P1 {
            smallest
        } else if val[q.0] == TOP {
            continue;
        } else {
            lifting.realizing_move(q, &val).unwrap_or(smallest)
        };
        match a.owner(q) {
            Owner::P1 => p1.set(q, chosen),
            Owner::P2 => p2.set(q, chosen),
        }
    }
    for (q, succ) in losing_player_moves(a, &regions.win2) {
        p2.set(q, succ);
    }

    let measure = ProgressMeasure {
        values: val.iter().map(|&v| (v != TOP).then_some(v)).collect(),
        cap,
    };
    EnergySolution { regions, p1, p2, measure }
}

/// Player-2 moves on its winning region that make every cycle negative.
///
/// Inside `win2` player 2 wins from everywhere, so with the players swapped
/// and weights `-(k+1)·w - 1` (where `k = |win2|`) the swapped game is won by
/// player 2 everywhere, and its credit-realizing moves close only cycles whose
/// original weight is negative.
fn losing_player_moves(a: &Arena, win2: &BTreeSet<NodeId>) -> Vec<(NodeId, NodeId)> {
    if win2.is_empty() {
        return Vec::new();
    }
    let active: Vec<bool> = a.nodes().map(|q| win2.contains(&q)).collect();
    let k = win2.len() as i64;
    let scale = k + 1;
    let weight = move |e: &Edge| -(scale * e.weight) - 1;
    let max_w = a.max_weight().saturating_mul(scale).saturating_add(1);
    let lifting = Lifting {
        arena: a,
        credit_owner: Owner::P2,
        weight,
        active: &active,
        cap: credit_cap(win2.len(), max_w),
    };
    let val = lifting.fixpoint();
    win2.iter()
        .filter(|&&q| a.owner(q) == Owner::P2)
        .map(|&q| {
            let succ = lifting.realizing_move(q, &val).expect("player 2 wins its own region");
            (q, succ)
        })
        .collect()
}

/// Least initial credit with which player 1 wins from `q`, or `None` if
/// player 2 wins there.
pub fn min_credit(a: &Arena, q: NodeId) -> Result<Option<i64>> {
    if q.0 >= a.node_count() {
        return Err(Error::UnknownNode(q.to_string()));
    }
    Ok(solve_energy(a).measure.get(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{parse_arena, ArenaBuilder};
    use crate::generate::{random_arena, GenParams};
    use proptest::prelude::*;

    fn ids(v: &[usize]) -> BTreeSet<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    fn single_loop(owner: Owner, w: i64) -> Arena {
        let mut b = ArenaBuilder::new();
        let q = b.add_node("q", owner).unwrap();
        b.add_edge(q, q, w, false).unwrap();
        b.build().unwrap()
    }

    /// Minimum weight of a cycle reachable from `start` in the graph that
    /// keeps every edge of `q` when `choice(q)` is `None`, and only the
    /// chosen one otherwise; computed by exhaustive simple-path search.
    fn min_reachable_cycle(a: &Arena, start: NodeId, choice: &dyn Fn(NodeId) -> Option<NodeId>) -> i64 {
        fn succs(a: &Arena, q: NodeId, choice: &dyn Fn(NodeId) -> Option<NodeId>) -> Vec<(NodeId, i64)> {
            match choice(q) {
                Some(s) => vec![(s, a.weight(q, s).unwrap())],
                None => a.out_edges(q).map(|e| (e.dst, e.weight)).collect(),
            }
        }
        fn dfs(a: &Arena, path: &mut Vec<NodeId>, sums: &mut Vec<i64>, best: &mut i64, choice: &dyn Fn(NodeId) -> Option<NodeId>) {
            let q = *path.last().unwrap();
            for (s, w) in succs(a, q, choice) {
                let total = sums.last().unwrap() + w;
                if let Some(pos) = path.iter().position(|&p| p == s) {
                    *best = (*best).min(total - sums[pos]);
                } else {
                    path.push(s);
                    sums.push(total);
                    dfs(a, path, sums, best, choice);
                    path.pop();
                    sums.pop();
                }
            }
        }
        let mut best = i64::MAX;
        dfs(a, &mut vec![start], &mut vec![0], &mut best, choice);
        best
    }

    #[test]
    fn single_loops() {
        let s = solve_energy(&single_loop(Owner::P1, 0));
        assert_eq!(s.regions.win1, ids(&[0]));
        assert_eq!(s.regions.credit[&NodeId(0)], 0);
        let s = solve_energy(&single_loop(Owner::P1, -1));
        assert_eq!(s.regions.win2, ids(&[0]));
        assert!(s.regions.credit.is_empty());
    }

    #[test]
    fn fig3_as_regular_game() {
        let a = parse_arena("arena v1\nnode q p2\nnode r p1\nedge q q -1\nedge q r 0 fair\nedge r r 0\n").unwrap();
        let s = solve_energy(&a);
        assert_eq!(s.regions.win1, ids(&[1]));
        assert_eq!(s.regions.win2, ids(&[0]));
        assert_eq!(s.regions.credit[&NodeId(1)], 0);
        assert_eq!(s.p2.get(NodeId(0)), Some(NodeId(0)));
        assert_eq!(min_credit(&a, NodeId(0)).unwrap(), None);
        assert!(min_credit(&a, NodeId(5)).is_err());
    }

    #[test]
    fn chain_credit() {
        let a = parse_arena("arena v1\nnode q p1\nnode p p1\nedge q p -3\nedge p q 3\n").unwrap();
        assert_eq!(min_credit(&a, NodeId(0)).unwrap(), Some(3));
        assert_eq!(min_credit(&a, NodeId(1)).unwrap(), Some(0));
    }

    #[test]
    fn player2_avoids_harmless_top_successor() {
        // Both successors of p are losing for player 1, but only the move to
        // r closes a negative cycle.
        let text = "arena v1\nnode p p2\nnode r p1\nedge p p 0\nedge p r 0\nedge r p -1\n";
        let s = solve_energy(&parse_arena(text).unwrap());
        assert_eq!(s.regions.win2, ids(&[0, 1]));
        assert_eq!(s.p2.get(NodeId(0)), Some(NodeId(1)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn strategies_are_sound(seed in 0u64..10_000, nodes in 1usize..7, w in 0i64..5) {
            let a = random_arena(&GenParams { nodes, max_weight: w, fair: None, density: 0.35, seed });
            let s = solve_energy(&a);
            prop_assert!(s.regions.is_partition(a.node_count()));
            s.p1.check(&a).unwrap();
            let cap = a.node_count() as i64 * a.max_weight();
            for (&q, &c) in &s.regions.credit {
                prop_assert!(c <= cap);
                prop_assert_eq!(s.measure.get(q), Some(c));
            }
            for &q in &s.regions.win1 {
                let fixed = |x: NodeId| (a.owner(x) == Owner::P1).then(|| s.p1.get(x).unwrap());
                prop_assert!(min_reachable_cycle(&a, q, &fixed) >= 0);
            }
            for &q in &s.regions.win2 {
                let fixed = |x: NodeId| if a.owner(x) == Owner::P2 { s.p2.get(x) } else { None };
                prop_assert!(max_reachable_cycle(&a, q, &fixed) < 0);
            }
        }
    }

    fn max_reachable_cycle(a: &Arena, start: NodeId, choice: &dyn Fn(NodeId) -> Option<NodeId>) -> i64 {
        let negated = a.map_weights(|e| Ok(-e.weight)).unwrap();
        -min_reachable_cycle(&negated, start, choice)
    }
}
