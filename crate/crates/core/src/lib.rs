//! Solvers for weighted two-player graph games under strong transition
//! fairness.

pub mod arena;
pub mod energy;
pub mod error;
pub mod fair;
pub mod gadgets;
pub mod generate;
mod graph;
pub mod meanpayoff;
pub mod oracle;
pub mod rational;
pub mod strategies;

pub use arena::{export_dot, parse_arena, shift_and_scale, validate, Arena, ArenaBuilder, Edge, NodeId, Owner, Violation};
pub use energy::{min_credit, solve_energy, EnergySolution, PositionalStrategy, ProgressMeasure, WinRegions};
pub use fair::{
    check_determinacy, fair_mp_optimal_values, solve, solve_fair_energy, solve_fair_mp, values, Determinacy,
    FairObjectiveSpec, FairSolveReport, GadgetSolution, GameKind,
};
pub use gadgets::{build_gadget, project_regions, BranchRole, FairGadget, GadgetKind, GadgetMap};
pub use error::{Error, Result};
pub use generate::{random_arena, GenParams};
pub use meanpayoff::{optimal_values, solve_mp_threshold, ValueTable};
pub use oracle::{oracle_fair, oracle_fair_values, oracle_regular, oracle_values, OracleBudget};
pub use rational::Rational;
pub use strategies::{
    periodic_program, simulate, simulate_bounded, synthesize, synthesize_for, verify_machine, EscalatingSchedule,
    LassoAnalysis, RoundRule, Step, StrategyMachine, SynthesizedStrategy, Synthesis, Verdict,
};
