use std::collections::HashMap;

use super::{LassoAnalysis, StrategyMachine};
use crate::arena::{shift_and_scale, Arena, NodeId, Owner};
use crate::error::{Error, Result};
use crate::fair::{FairObjectiveSpec, GameKind};
use crate::graph::{
    bfs_path, covering_tour, longest_potentials, negative_cycle, nonnegative_cycle, nontrivial_sccs, positive_cycle,
    Arc, Graph,
};

/// Product states explored before verification gives up.
const PRODUCT_LIMIT: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    /// A play consistent with the machine that the machine loses.
    CounterPlay(LassoAnalysis),
}

/// The arena restricted to the machine's choices, with machine memory in the
/// states. Arc weights come from the shifted arena.
struct Product<'a> {
    arena: &'a Arena,
    g: Graph,
    node: Vec<NodeId>,
    starts: Vec<usize>,
}

impl<'a> Product<'a> {
    fn build(a: &'a Arena, weights: &Arena, s: &StrategyMachine, starts: &[NodeId]) -> Result<Self> {
        // Joint memory is a mixed-radix number with one digit per node that
        // has more than one local state.
        let mut stride = vec![0u128; a.node_count()];
        let mut radix = 1u128;
        for q in a.nodes().filter(|&q| s.local_states(q) > 1) {
            stride[q.0] = radix;
            radix = radix
                .checked_mul(s.local_states(q) as u128)
                .ok_or_else(|| Error::Budget("strategy memory does not fit in 128 bits".into()))?;
        }
        let mut index: HashMap<(NodeId, u128), usize> = HashMap::new();
        let mut p = Product { arena: a, g: Graph::default(), node: Vec::new(), starts: Vec::new() };
        let mut memory: Vec<u128> = Vec::new();
        let mut intern = |p: &mut Product, memory: &mut Vec<u128>, q: NodeId, m: u128| -> Result<usize> {
            if let Some(&i) = index.get(&(q, m)) {
                return Ok(i);
            }
            if p.node.len() >= PRODUCT_LIMIT {
                return Err(Error::Budget(format!("strategy product exceeds {PRODUCT_LIMIT} states")));
            }
            let i = p.g.add_node();
            p.node.push(q);
            memory.push(m);
            index.insert((q, m), i);
            Ok(i)
        };
        for &q in starts {
            if q.0 >= a.node_count() {
                return Err(Error::UnknownNode(q.to_string()));
            }
            let i = intern(&mut p, &mut memory, q, 0)?;
            p.starts.push(i);
        }
        let mut u = 0;
        while u < p.node.len() {
            let q = p.node[u];
            let m = memory[u];
            let mut arcs = Vec::new();
            if a.owner(q) == s.owner() {
                let size = s.local_states(q) as u128;
                let (local, next_m) = if size > 1 {
                    let local = (m / stride[q.0]) % size;
                    let step = s.step(q, local as usize);
                    (local, m - local * stride[q.0] + step.next as u128 * stride[q.0])
                } else {
                    (0, m)
                };
                let step = s.step(q, local as usize);
                let v = intern(&mut p, &mut memory, step.succ, next_m)?;
                arcs.push(Arc { to: v, weight: weights.weight(q, step.succ).expect("machine moves are edges") });
            } else {
                for e in a.out_edges(q) {
                    let v = intern(&mut p, &mut memory, e.dst, m)?;
                    arcs.push(Arc { to: v, weight: weights.weight(q, e.dst).expect("same edges") });
                }
            }
            p.g.adj[u] = arcs;
            u += 1;
        }
        Ok(p)
    }

    fn is_fair(&self, u: usize, arc: &Arc) -> bool {
        self.arena.edge(self.node[u], self.node[arc.to]).is_some_and(|e| e.fair)
    }

    fn all(&self) -> Vec<bool> {
        vec![true; self.g.len()]
    }

    /// Lasso through the product: a shortest path from some start to
    /// `cycle[0]`, then `cycle`.
    fn lasso(&self, cycle: &[usize]) -> Result<LassoAnalysis> {
        let target = cycle[0];
        let path = self
            .starts
            .iter()
            .filter_map(|&s| bfs_path(&self.g, s, &|v| v == target, &|_, _| true))
            .min_by_key(|p| p.len())
            .expect("every product state is reachable from a start");
        let prefix = path[..path.len() - 1].iter().map(|&u| self.node[u]).collect();
        LassoAnalysis::new(self.arena, prefix, cycle.iter().map(|&u| self.node[u]).collect())
    }

    /// Strongly connected sets within `alive`, using arcs accepted by
    /// `arc_ok`, in which every fair arc out of a member stays inside.
    fn fair_closed(&self, mut alive: Vec<bool>, arc_ok: &dyn Fn(usize, &Arc) -> bool) -> Vec<Vec<usize>> {
        loop {
            let comps = nontrivial_sccs(&self.g, &alive, arc_ok);
            let mut comp_of = vec![usize::MAX; self.g.len()];
            for (i, c) in comps.iter().enumerate() {
                for &u in c {
                    comp_of[u] = i;
                }
            }
            let mut removed = false;
            for u in 0..self.g.len() {
                if !alive[u] {
                    continue;
                }
                let leaks = comp_of[u] == usize::MAX
                    || self.g.adj[u]
                        .iter()
                        .any(|a| self.is_fair(u, a) && !(arc_ok(u, a) && comp_of[a.to] == comp_of[u]));
                if leaks {
                    alive[u] = false;
                    removed = true;
                }
            }
            if !removed {
                return comps;
            }
        }
    }

    /// A closed walk through all of `comp` taking every fair arc in it, with
    /// `bad` appended as often as `enough` demands.
    fn pumped(
        &self,
        comp: &[usize],
        bad: &[usize],
        arc_ok: &dyn Fn(usize, &Arc) -> bool,
        enough: impl Fn(i64, i64) -> usize,
    ) -> Vec<usize> {
        let mut members = vec![false; self.g.len()];
        for &u in comp {
            members[u] = true;
        }
        let tour = covering_tour(&self.g, &members, bad[0], &|u, a| self.is_fair(u, a), arc_ok)
            .expect("fair-closed components are strongly connected");
        let k = enough(self.g.cycle_weight(&tour), self.g.cycle_weight(bad));
        let mut walk = tour;
        for _ in 0..k {
            walk.extend_from_slice(bad);
        }
        walk
    }
}

/// Repetitions of a cycle of weight `b < 0` after a tour of weight `t` that
/// make the total negative.
fn to_negative(t: i64, b: i64) -> usize {
    if t < 0 {
        1
    } else {
        (t / -b + 1) as usize
    }
}

/// Repetitions of a cycle of weight `b >= 0` after a tour of weight `t` that
/// make the total non-negative, where possible.
fn to_nonnegative(t: i64, b: i64) -> usize {
    if t >= 0 || b == 0 {
        1
    } else {
        ((-t + b - 1) / b) as usize
    }
}

fn one_cycle_through(g: &Graph, members: &[bool], x: usize) -> Option<Vec<usize>> {
    let inside = |_: usize, a: &Arc| members[a.to];
    g.adj[x]
        .iter()
        .filter(|a| members[a.to])
        .find_map(|a| bfs_path(g, a.to, &|v| v == x, &inside).map(|back| [vec![x], back[..back.len() - 1].to_vec()].concat()))
}

/// Checks whether `s` wins the game `spec` from every node in `starts`
/// against every opponent behaviour, returning a losing play otherwise.
pub fn verify_machine(a: &Arena, s: &StrategyMachine, spec: &FairObjectiveSpec, starts: &[NodeId]) -> Result<Verdict> {
    spec.check(a)?;
    s.check(a)?;
    let weights = match spec.game {
        GameKind::MeanPayoff => shift_and_scale(a, spec.threshold)?,
        GameKind::Energy => a.clone(),
    };
    let p = Product::build(a, &weights, s, starts)?;
    let g = &p.g;
    let any = |_: usize, _: &Arc| true;
    let bad_cycle = |members: &[bool]| match s.owner() {
        Owner::P1 => negative_cycle(g, members, &|w| w as i128),
        Owner::P2 => nonnegative_cycle(g, members),
    };
    let side = if a.has_fair_edges() { spec.side } else { None };

    if side != Some(s.owner().opponent()) {
        if let Some(c) = bad_cycle(&p.all()) {
            return Ok(Verdict::CounterPlay(p.lasso(&c)?));
        }
        if side == Some(s.owner()) {
            for q in a.fair_nodes() {
                for f in a.fair_successors(q) {
                    let skips: Vec<bool> =
                        (0..g.len()).map(|u| !(p.node[u] == q && g.adj[u].iter().all(|a| p.node[a.to] == f))).collect();
                    for comp in nontrivial_sccs(g, &skips, &any) {
                        if let Some(&x) = comp.iter().find(|&&u| p.node[u] == q) {
                            let mut members = vec![false; g.len()];
                            for &u in &comp {
                                members[u] = true;
                            }
                            let c = one_cycle_through(g, &members, x).expect("component is strongly connected");
                            return Ok(Verdict::CounterPlay(p.lasso(&c)?));
                        }
                    }
                }
            }
        }
        return Ok(Verdict::Verified);
    }

    let comps = p.fair_closed(p.all(), &any);
    let inside = |comp: &[usize]| {
        let mut m = vec![false; g.len()];
        for &u in comp {
            m[u] = true;
        }
        m
    };
    if spec.game == GameKind::Energy && s.owner() == Owner::P2 {
        for comp in &comps {
            if let Some(c) = positive_cycle(g, &inside(comp)) {
                let walk = p.pumped(comp, &c, &any, to_nonnegative);
                return Ok(Verdict::CounterPlay(p.lasso(&walk)?));
            }
        }
        for comp in &comps {
            let members = inside(comp);
            let pot = longest_potentials(g, &members);
            let tight = |u: usize, a: &Arc| members[u] && members[a.to] && pot[a.to] == pot[u] + a.weight as i128;
            if let Some(zero) = p.fair_closed(members.clone(), &tight).first() {
                let mut zone = vec![false; g.len()];
                for &u in zero {
                    zone[u] = true;
                }
                let walk = covering_tour(g, &zone, zero[0], &|u, a| p.is_fair(u, a), &tight)
                    .expect("fair-closed components are strongly connected");
                return Ok(Verdict::CounterPlay(p.lasso(&walk)?));
            }
        }
        return Ok(Verdict::Verified);
    }
    for comp in &comps {
        if let Some(c) = bad_cycle(&inside(comp)) {
            let walk = match s.owner() {
                Owner::P1 => p.pumped(comp, &c, &any, to_negative),
                Owner::P2 => p.pumped(comp, &c, &any, to_nonnegative),
            };
            return Ok(Verdict::CounterPlay(p.lasso(&walk)?));
        }
    }
    Ok(Verdict::Verified)
}
