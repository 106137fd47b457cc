//! Finite-memory strategies, escalating schedules, simulation and
//! verification.
//!
//! A [`StrategyMachine`] keeps one local counter per node of its owner. At a
//! node with local state `m` it plays `program[m].succ` and moves that node's
//! counter to `program[m].next`; counters of other nodes are untouched. All
//! counters start at 0.

mod simulate;
mod synth;
mod verify;

pub use simulate::{simulate, simulate_bounded, LassoAnalysis};
pub use synth::{synthesize, synthesize_for, SynthesizedStrategy, Synthesis};
pub use verify::{verify_machine, Verdict};

use std::fmt::Write as _;

use crate::arena::{Arena, NodeId, Owner};
use crate::energy::PositionalStrategy;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub succ: NodeId,
    pub next: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyMachine {
    owner: Owner,
    programs: Vec<Vec<Step>>,
}

impl StrategyMachine {
    /// A machine without any moves yet.
    pub fn new(owner: Owner, node_count: usize) -> Self {
        StrategyMachine { owner, programs: vec![Vec::new(); node_count] }
    }

    pub fn positional(p: &PositionalStrategy) -> Self {
        let mut m = StrategyMachine::new(p.owner(), p.node_count());
        for (q, s) in p.iter() {
            m.set_move(q, s);
        }
        m
    }

    pub fn owner(&self) -> Owner {
        self.owner
    }

    pub fn node_count(&self) -> usize {
        self.programs.len()
    }

    /// Always play `succ` at `q`.
    pub fn set_move(&mut self, q: NodeId, succ: NodeId) {
        self.programs[q.0] = vec![Step { succ, next: 0 }];
    }

    /// Play `moves` at `q` one after the other, starting over after the last.
    pub fn set_cycle(&mut self, q: NodeId, moves: &[NodeId]) {
        let k = moves.len();
        self.programs[q.0] = moves.iter().enumerate().map(|(i, &succ)| Step { succ, next: (i + 1) % k }).collect();
    }

    pub fn set_steps(&mut self, q: NodeId, steps: Vec<Step>) {
        self.programs[q.0] = steps;
    }

    pub fn program(&self, q: NodeId) -> &[Step] {
        &self.programs[q.0]
    }

    pub fn step(&self, q: NodeId, state: usize) -> Step {
        self.programs[q.0][state]
    }

    /// Number of local states at `q` (0 where the machine has no move).
    pub fn local_states(&self, q: NodeId) -> usize {
        self.programs[q.0].len()
    }

    pub fn is_positional(&self) -> bool {
        self.programs.iter().all(|p| p.len() <= 1)
    }

    /// The move at `q` in local state 0.
    pub fn first_move(&self, q: NodeId) -> Option<NodeId> {
        self.programs[q.0].first().map(|s| s.succ)
    }

    /// Checks that the machine moves at every node of its owner, only along
    /// arena edges, and only to existing local states.
    pub fn check(&self, a: &Arena) -> Result<()> {
        if self.programs.len() != a.node_count() {
            return Err(Error::Invalid(format!(
                "machine covers {} nodes, arena has {}",
                self.programs.len(),
                a.node_count()
            )));
        }
        for q in a.nodes() {
            let program = &self.programs[q.0];
            if a.owner(q) != self.owner {
                if !program.is_empty() {
                    return Err(Error::Invalid(format!("machine moves at {} which it does not own", a.name(q))));
                }
                continue;
            }
            if program.is_empty() {
                return Err(Error::IncompleteMachine(q));
            }
            for step in program {
                if step.succ.0 >= a.node_count() || a.edge(q, step.succ).is_none() {
                    return Err(Error::IllegalMove { from: q, to: step.succ });
                }
                if step.next >= program.len() {
                    return Err(Error::Invalid(format!("local state {} out of range at {}", step.next, a.name(q))));
                }
            }
        }
        Ok(())
    }

    /// Text table with one `state <m> at <node> -> <succ> next <m'>` line per step.
    pub fn to_text(&self, a: &Arena) -> String {
        let mut s = format!("machine {}\n", self.owner.token());
        for q in a.nodes() {
            for (m, step) in self.programs[q.0].iter().enumerate() {
                let _ = writeln!(s, "state {m} at {} -> {} next {}", a.name(q), a.name(step.succ), step.next);
            }
        }
        s
    }

    pub fn parse(a: &Arena, text: &str) -> Result<StrategyMachine> {
        let syntax = |line: usize, msg: String| Error::Syntax { line, col: 1, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or_else(|| syntax(1, "expected `machine p1|p2`".into()))?;
        let owner = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["machine", "p1"] => Owner::P1,
            ["machine", "p2"] => Owner::P2,
            _ => return Err(syntax(line, "expected `machine p1|p2`".into())),
        };
        let mut m = StrategyMachine::new(owner, a.node_count());
        let mut seen: Vec<Vec<Option<Step>>> = vec![Vec::new(); a.node_count()];
        for (line, text) in lines {
            let toks: Vec<&str> = text.split_whitespace().collect();
            let ["state", state, "at", node, "->", succ, "next", next] = toks[..] else {
                return Err(syntax(line, "expected `state <m> at <node> -> <succ> next <m'>`".into()));
            };
            let number = |t: &str| t.parse::<usize>().map_err(|_| syntax(line, format!("bad state `{t}`")));
            let lookup = |t: &str| a.node_by_name(t).ok_or_else(|| syntax(line, format!("unknown node `{t}`")));
            let (state, next) = (number(state)?, number(next)?);
            let (q, succ) = (lookup(node)?, lookup(succ)?);
            let slots = &mut seen[q.0];
            if slots.len() <= state {
                slots.resize(state + 1, None);
            }
            if slots[state].is_some() {
                return Err(syntax(line, format!("state {state} at `{node}` defined twice")));
            }
            slots[state] = Some(Step { succ, next });
        }
        for q in a.nodes() {
            let slots = std::mem::take(&mut seen[q.0]);
            let steps: Option<Vec<Step>> = slots.into_iter().collect();
            let steps = steps.ok_or_else(|| Error::Invalid(format!("missing local state at `{}`", a.name(q))))?;
            m.programs[q.0] = steps;
        }
        m.check(a)?;
        Ok(m)
    }
}

/// `repeats` copies of `preferred` before each fair successor in turn.
pub fn periodic_program(preferred: NodeId, fair: &[NodeId], repeats: usize) -> Vec<NodeId> {
    let mut moves = Vec::with_capacity((repeats + 1) * fair.len());
    for &f in fair {
        moves.extend(std::iter::repeat_n(preferred, repeats));
        moves.push(f);
    }
    moves
}

/// Per fair node: the successor played between fair moves and the fair
/// successors in the order they are served.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRule {
    pub node: NodeId,
    pub preferred: NodeId,
    pub fair: Vec<NodeId>,
}

/// An infinite-memory strategy: in round `i` every fair node with a rule
/// plays its preferred successor `i` times and then its next fair successor.
/// All other nodes follow `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscalatingSchedule {
    pub base: StrategyMachine,
    pub rules: Vec<RoundRule>,
    /// Threshold the schedule is built for.
    pub threshold: Rational,
    /// Node count of the arena.
    pub node_count: usize,
    /// Largest absolute weight after shifting by the threshold.
    pub shifted_max_weight: i64,
}

impl EscalatingSchedule {
    pub fn owner(&self) -> Owner {
        self.base.owner()
    }

    pub fn rule(&self, q: NodeId) -> Option<&RoundRule> {
        self.rules.iter().find(|r| r.node == q)
    }

    /// Finite machine that plays every round as round `r`.
    pub fn truncate(&self, r: usize) -> StrategyMachine {
        let mut m = self.base.clone();
        for rule in &self.rules {
            m.set_cycle(rule.node, &periodic_program(rule.preferred, &rule.fair, r));
        }
        m
    }

    /// Number of preferred moves per fair move that keeps the loss below `epsilon`.
    pub fn rounds_for(&self, epsilon: Rational) -> Result<usize> {
        if epsilon <= Rational::ZERO {
            return Err(Error::NonPositiveEpsilon(epsilon));
        }
        let n = self.node_count as i128;
        let bound = Rational::integer(n * n * self.shifted_max_weight as i128) / epsilon;
        usize::try_from(bound.ceil().max(1)).map_err(|_| Error::Overflow)
    }

    /// Finite machine whose plays lose at most `epsilon` against the threshold.
    pub fn finitize(&self, epsilon: Rational) -> Result<StrategyMachine> {
        Ok(self.truncate(self.rounds_for(epsilon)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::parse_arena;

    const FIG1: &str = "arena v1\nnode q p1\nnode p p1\nedge q q 1\nedge q p -4 fair\nedge p q 0\n";

    fn fig1_schedule() -> EscalatingSchedule {
        let mut base = StrategyMachine::new(Owner::P1, 2);
        base.set_move(NodeId(1), NodeId(0));
        EscalatingSchedule {
            base,
            rules: vec![RoundRule { node: NodeId(0), preferred: NodeId(0), fair: vec![NodeId(1)] }],
            threshold: Rational::ONE,
            node_count: 2,
            shifted_max_weight: 5,
        }
    }

    #[test]
    fn programs() {
        let p = periodic_program(NodeId(0), &[NodeId(1), NodeId(2)], 2);
        assert_eq!(p, [0, 0, 1, 0, 0, 2].map(NodeId));
        assert_eq!(periodic_program(NodeId(0), &[NodeId(3)], 0), vec![NodeId(3)]);
    }

    #[test]
    fn truncation_and_finitize() {
        let a = parse_arena(FIG1).unwrap();
        let s = fig1_schedule();
        let m = s.truncate(4);
        m.check(&a).unwrap();
        assert_eq!(m.local_states(NodeId(0)), 5);
        assert_eq!(m.step(NodeId(0), 4), Step { succ: NodeId(1), next: 0 });
        assert_eq!(s.rounds_for(Rational::new(1, 10)).unwrap(), 200);
        assert!(matches!(s.finitize(Rational::ZERO), Err(Error::NonPositiveEpsilon(_))));
        assert_eq!(s.rounds_for(Rational::integer(1000)).unwrap(), 1);
    }

    #[test]
    fn text_round_trip() {
        let a = parse_arena(FIG1).unwrap();
        let m = fig1_schedule().truncate(2);
        let text = m.to_text(&a);
        assert!(text.starts_with("machine p1\nstate 0 at q -> q next 1\n"));
        assert_eq!(StrategyMachine::parse(&a, &text).unwrap(), m);
        assert!(StrategyMachine::parse(&a, "machine p1\nstate 0 at q -> q next 0\n").is_err());
        assert!(StrategyMachine::parse(&a, "machine p3\n").is_err());
        assert!(StrategyMachine::parse(&a, "machine p1\nstate 0 at q -> z next 0\n").is_err());
    }

    #[test]
    fn check_rejects_bad_machines() {
        let a = parse_arena(FIG1).unwrap();
        let mut m = StrategyMachine::new(Owner::P1, 2);
        m.set_move(NodeId(0), NodeId(0));
        assert_eq!(m.check(&a), Err(Error::IncompleteMachine(NodeId(1))));
        m.set_move(NodeId(1), NodeId(1));
        assert_eq!(m.check(&a), Err(Error::IllegalMove { from: NodeId(1), to: NodeId(1) }));
    }
}
