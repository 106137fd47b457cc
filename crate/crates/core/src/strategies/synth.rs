use std::collections::BTreeSet;

use super::{periodic_program, EscalatingSchedule, RoundRule, StrategyMachine};
use crate::arena::{Arena, NodeId, Owner};
use crate::energy::{solve_energy, PositionalStrategy};
use crate::error::{Error, Result};
use crate::fair::{fair_energy_gadget, fair_mp_gadget, solve, FairObjectiveSpec, GadgetSolution, GameKind};
use crate::meanpayoff::solve_mp_threshold;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SynthesizedStrategy {
    Machine(StrategyMachine),
    Schedule(EscalatingSchedule),
}

/// A winning strategy together with the region it wins from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub strategy: SynthesizedStrategy,
    pub region: BTreeSet<NodeId>,
}

impl Synthesis {
    /// The strategy as a finite machine; schedules are cut off so that they
    /// lose at most `epsilon`.
    pub fn machine(&self, epsilon: Rational) -> Result<StrategyMachine> {
        match &self.strategy {
            SynthesizedStrategy::Machine(m) => Ok(m.clone()),
            SynthesizedStrategy::Schedule(s) => s.finitize(epsilon),
        }
    }
}

/// Builds a strategy for `player` in the game `spec` on `a`, winning from
/// every node of the returned region.
pub fn synthesize(a: &Arena, spec: &FairObjectiveSpec, player: Owner) -> Result<Synthesis> {
    spec.check(a)?;
    let region = solve(a, spec)?.regions.region(player).clone();
    let side = if a.has_fair_edges() { spec.side } else { None };
    let strategy = match (spec.game, side) {
        (GameKind::MeanPayoff, None) => {
            let sol = solve_mp_threshold(a, spec.threshold)?;
            SynthesizedStrategy::Machine(StrategyMachine::positional(sol.strategy(player)))
        }
        (GameKind::Energy, None) => {
            SynthesizedStrategy::Machine(StrategyMachine::positional(solve_energy(a).strategy(player)))
        }
        (GameKind::MeanPayoff, Some(side)) => {
            let g = fair_mp_gadget(a, side, spec.threshold)?;
            match (side == player, side) {
                (true, Owner::P1) => SynthesizedStrategy::Schedule(escalating(a, &g, spec.threshold)),
                (true, Owner::P2) => SynthesizedStrategy::Machine(periodic_mp(a, &g)),
                (false, _) => SynthesizedStrategy::Machine(restrict(a, g.solution.strategy(player))),
            }
        }
        (GameKind::Energy, Some(Owner::P1)) => {
            let g = fair_energy_gadget(a)?;
            SynthesizedStrategy::Machine(match player {
                Owner::P1 => periodic_energy(a, &g),
                Owner::P2 => restrict(a, g.solution.strategy(Owner::P2)),
            })
        }
        (GameKind::Energy, Some(Owner::P2)) => SynthesizedStrategy::Machine(match player {
            Owner::P1 => StrategyMachine::positional(solve_energy(a).strategy(Owner::P1)),
            Owner::P2 => periodic_mp(a, &fair_mp_gadget(a, Owner::P2, Rational::ZERO)?),
        }),
    };
    Ok(Synthesis { strategy, region })
}

/// Like [`synthesize`], failing with [`Error::LosingNodes`] when some of
/// `nodes` lie outside the winning region.
pub fn synthesize_for(a: &Arena, spec: &FairObjectiveSpec, player: Owner, nodes: &[NodeId]) -> Result<Synthesis> {
    let s = synthesize(a, spec, player)?;
    let losing: Vec<NodeId> = nodes.iter().copied().filter(|q| !s.region.contains(q)).collect();
    if losing.is_empty() {
        Ok(s)
    } else {
        Err(Error::LosingNodes { player, nodes: losing })
    }
}

fn play(g: &GadgetSolution, player: Owner, q: NodeId) -> NodeId {
    g.solution.strategy(player).get(q).expect("gadget strategies are total")
}

/// The gadget strategy on the original nodes that carry no gadget.
fn restrict(a: &Arena, p: &PositionalStrategy) -> StrategyMachine {
    let mut m = StrategyMachine::new(p.owner(), a.node_count());
    for q in a.nodes().filter(|&q| a.owner(q) == p.owner()) {
        m.set_move(q, p.get(q).expect("gadget strategies are total"));
    }
    m
}

fn escalating(a: &Arena, g: &GadgetSolution, threshold: Rational) -> EscalatingSchedule {
    let mut base = restrict(a, g.solution.strategy(Owner::P1));
    let mut rules = Vec::new();
    for gad in g.map.gadgets() {
        let q = gad.root;
        if play(g, Owner::P1, q) == gad.right {
            base.set_move(q, play(g, Owner::P1, gad.escape));
        } else {
            let preferred = play(g, Owner::P1, gad.middle);
            base.set_move(q, preferred);
            rules.push(RoundRule { node: q, preferred, fair: a.fair_successors(q) });
        }
    }
    EscalatingSchedule {
        base,
        rules,
        threshold,
        node_count: a.node_count(),
        shifted_max_weight: g.shifted.max_weight(),
    }
}

/// Player 2 with fairness on its own nodes: play the preferred successor
/// often enough between fair moves that a positive fair detour can never make
/// up for it.
fn periodic_mp(a: &Arena, g: &GadgetSolution) -> StrategyMachine {
    let n = a.node_count();
    let w = g.shifted.max_weight() as usize;
    let period = n * n * n * w + n * n + n + 1;
    let mut m = restrict(a, g.solution.strategy(Owner::P2));
    for gad in g.map.gadgets() {
        let q = gad.root;
        if play(g, Owner::P2, q) == gad.right {
            m.set_move(q, play(g, Owner::P2, gad.escape));
        } else {
            let preferred = play(g, Owner::P2, gad.middle);
            m.set_cycle(q, &periodic_program(preferred, &a.fair_successors(q), period - 1));
        }
    }
    m
}

fn periodic_energy(a: &Arena, g: &GadgetSolution) -> StrategyMachine {
    let n = a.node_count();
    let repeats = n * n * n * a.max_weight() as usize;
    let mut m = restrict(a, g.solution.strategy(Owner::P1));
    for gad in g.map.gadgets() {
        let q = gad.root;
        let fair = a.fair_successors(q);
        if play(g, Owner::P1, q) == gad.right {
            m.set_move(q, play(g, Owner::P1, gad.escape));
        } else if Some(play(g, Owner::P1, gad.middle)) == gad.positive {
            let preferred = play(g, Owner::P1, gad.positive.expect("energy gadgets have a penalised node"));
            m.set_cycle(q, &periodic_program(preferred, &fair, repeats));
        } else {
            m.set_cycle(q, &fair);
        }
    }
    m
}
