use std::collections::HashMap;

use super::StrategyMachine;
use crate::arena::{Arena, NodeId, Owner};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// An ultimately periodic play: `prefix` once, then `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoAnalysis {
    pub prefix: Vec<NodeId>,
    /// Nodes of the repeated part; the play returns to `cycle[0]` after the last.
    pub cycle: Vec<NodeId>,
    pub cycle_weight: i64,
    pub cycle_mean: Rational,
    /// Whether every fair edge leaving a node of the cycle is taken on the cycle.
    pub fair_on_cycle: bool,
    /// Lowest running weight over the prefix and one pass of the cycle,
    /// starting from 0.
    pub min_prefix_weight: i64,
}

impl LassoAnalysis {
    /// Analyses the play `prefix · cycle^ω`. Consecutive nodes must be joined
    /// by arena edges and `cycle` must be non-empty.
    pub fn new(a: &Arena, prefix: Vec<NodeId>, cycle: Vec<NodeId>) -> Result<LassoAnalysis> {
        if cycle.is_empty() {
            return Err(Error::Invalid("lasso cycle is empty".into()));
        }
        let weight = |u: NodeId, v: NodeId| a.weight(u, v).ok_or(Error::IllegalMove { from: u, to: v });
        let mut running = 0i64;
        let mut lowest = 0i64;
        let mut walk = prefix.iter().chain(&cycle).copied().collect::<Vec<_>>();
        walk.push(cycle[0]);
        for p in walk.windows(2) {
            running = running.checked_add(weight(p[0], p[1])?).ok_or(Error::Overflow)?;
            lowest = lowest.min(running);
        }
        let k = cycle.len();
        let mut cycle_weight = 0i64;
        let mut taken = Vec::with_capacity(k);
        for i in 0..k {
            let (u, v) = (cycle[i], cycle[(i + 1) % k]);
            cycle_weight = cycle_weight.checked_add(weight(u, v)?).ok_or(Error::Overflow)?;
            taken.push((u, v));
        }
        let fair_on_cycle = cycle.iter().all(|&u| a.fair_successors(u).into_iter().all(|f| taken.contains(&(u, f))));
        Ok(LassoAnalysis {
            prefix,
            cycle,
            cycle_weight,
            cycle_mean: Rational::new(cycle_weight as i128, k as i128),
            fair_on_cycle,
            min_prefix_weight: lowest,
        })
    }
}

fn check_pair(a: &Arena, p1: &StrategyMachine, p2: &StrategyMachine) -> Result<()> {
    for (m, owner) in [(p1, Owner::P1), (p2, Owner::P2)] {
        if m.owner() != owner {
            return Err(Error::Invalid(format!("expected a machine for {owner}, got one for {}", m.owner())));
        }
        m.check(a)?;
    }
    Ok(())
}

fn run(a: &Arena, p1: &StrategyMachine, p2: &StrategyMachine, start: NodeId, limit: Option<usize>) -> Result<LassoAnalysis> {
    check_pair(a, p1, p2)?;
    if start.0 >= a.node_count() {
        return Err(Error::UnknownNode(start.to_string()));
    }
    let mut memory = vec![0usize; a.node_count()];
    let mut seen: HashMap<(NodeId, Vec<usize>), usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut q = start;
    loop {
        if let Some(&first) = seen.get(&(q, memory.clone())) {
            let cycle = nodes.split_off(first);
            return LassoAnalysis::new(a, nodes, cycle);
        }
        if limit.is_some_and(|l| nodes.len() >= l) {
            return Err(Error::StepLimit(nodes.len()));
        }
        seen.insert((q, memory.clone()), nodes.len());
        nodes.push(q);
        let machine = if a.owner(q) == Owner::P1 { p1 } else { p2 };
        let step = machine.step(q, memory[q.0]);
        memory[q.0] = step.next;
        q = step.succ;
    }
}

/// Plays the two machines against each other from `start` until the joint
/// state repeats.
pub fn simulate(a: &Arena, p1: &StrategyMachine, p2: &StrategyMachine, start: NodeId) -> Result<LassoAnalysis> {
    run(a, p1, p2, start, None)
}

/// Like [`simulate`], giving up with [`Error::StepLimit`] after `max_steps` moves.
pub fn simulate_bounded(
    a: &Arena,
    p1: &StrategyMachine,
    p2: &StrategyMachine,
    start: NodeId,
    max_steps: usize,
) -> Result<LassoAnalysis> {
    run(a, p1, p2, start, Some(max_steps))
}
