//! Fair mean-payoff and energy games: gadget reductions, the decomposition
//! for energy games with fairness on player 2, and determinacy reporting.

use std::collections::BTreeSet;
use std::fmt;

use crate::arena::{shift_and_scale, Arena, NodeId, Owner};
use crate::energy::{solve_energy, EnergySolution, WinRegions};
use crate::error::{Error, Result};
use crate::gadgets::{build_gadget, project_regions, GadgetKind, GadgetMap};
use crate::meanpayoff::{optimal_values, search_values, solve_mp_threshold, ValueTable};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    MeanPayoff,
    Energy,
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::MeanPayoff => "mean-payoff",
            GameKind::Energy => "energy",
        })
    }
}

/// Objective of a (possibly fair) game. `side` is the player owning the fair
/// nodes, `None` for a regular game; `threshold` only matters for mean-payoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FairObjectiveSpec {
    pub game: GameKind,
    pub side: Option<Owner>,
    pub threshold: Rational,
}

impl FairObjectiveSpec {
    pub fn mean_payoff(side: Option<Owner>, threshold: Rational) -> Self {
        FairObjectiveSpec { game: GameKind::MeanPayoff, side, threshold }
    }

    pub fn energy(side: Option<Owner>) -> Self {
        FairObjectiveSpec { game: GameKind::Energy, side, threshold: Rational::ZERO }
    }

    /// Objective with the fairness side read off the arena.
    pub fn for_arena(a: &Arena, game: GameKind, threshold: Rational) -> Self {
        let threshold = if game == GameKind::Energy { Rational::ZERO } else { threshold };
        FairObjectiveSpec { game, side: a.fairness_side(), threshold }
    }

    /// Errors unless the arena's fair edges all belong to `side`.
    pub fn check(&self, a: &Arena) -> Result<()> {
        match (self.side, a.fairness_side()) {
            (Some(requested), Some(actual)) if requested != actual => {
                Err(Error::SideMismatch { requested, actual })
            }
            (None, Some(actual)) => Err(Error::SideMismatch { requested: actual.opponent(), actual }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Determinacy {
    Determined,
    NotDetermined(BTreeSet<NodeId>),
}

impl fmt::Display for Determinacy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Determinacy::Determined => f.write_str("determined"),
            Determinacy::NotDetermined(_) => f.write_str("not determined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairSolveReport {
    pub regions: WinRegions,
    /// Human-readable description of the reduction that produced the regions.
    pub route: String,
    pub determinacy: Determinacy,
}

impl FairSolveReport {
    fn new(regions: WinRegions, route: String) -> Self {
        let determinacy = verdict(&regions);
        FairSolveReport { regions, route, determinacy }
    }
}

fn verdict(r: &WinRegions) -> Determinacy {
    if r.undetermined.is_empty() {
        Determinacy::Determined
    } else {
        Determinacy::NotDetermined(r.undetermined.clone())
    }
}

pub fn check_determinacy(report: &FairSolveReport) -> Determinacy {
    verdict(&report.regions)
}

fn require_side(a: &Arena, side: Owner) -> Result<()> {
    FairObjectiveSpec::mean_payoff(Some(side), Rational::ZERO).check(a)
}

fn mp_kind(side: Owner) -> GadgetKind {
    match side {
        Owner::P1 => GadgetKind::FairMp1,
        Owner::P2 => GadgetKind::FairMp2,
    }
}

/// Everything the fair mean-payoff reduction computes, kept for strategy
/// synthesis.
#[derive(Clone, Debug)]
pub struct GadgetSolution {
    /// The input arena with weights shifted by the threshold (scaled for energy).
    pub shifted: Arena,
    pub gadget: Arena,
    pub map: GadgetMap,
    pub solution: EnergySolution,
}

pub(crate) fn fair_mp_gadget(a: &Arena, side: Owner, v: Rational) -> Result<GadgetSolution> {
    require_side(a, side)?;
    let shifted = shift_and_scale(a, v)?;
    let (gadget, map) = build_gadget(&shifted, mp_kind(side))?;
    let solution = solve_energy(&gadget);
    Ok(GadgetSolution { shifted, gadget, map, solution })
}

pub(crate) fn fair_energy_gadget(a: &Arena) -> Result<GadgetSolution> {
    require_side(a, Owner::P1)?;
    let (gadget, map) = build_gadget(a, GadgetKind::FairEnergy1)?;
    let solution = solve_energy(&gadget);
    Ok(GadgetSolution { shifted: a.clone(), gadget, map, solution })
}

/// Fair mean-payoff game with threshold `v` and fair nodes owned by `side`.
pub fn solve_fair_mp(a: &Arena, side: Owner, v: Rational) -> Result<FairSolveReport> {
    let g = fair_mp_gadget(a, side, v)?;
    let mut regions = project_regions(&g.solution.regions, &g.map)?;
    regions.credit.clear();
    Ok(FairSolveReport::new(regions, format!("{} gadget at threshold {v}", mp_kind(side).name())))
}

/// Optimal values of the fair mean-payoff game, re-building the gadget for
/// every probed threshold.
pub fn fair_mp_optimal_values(a: &Arena, side: Owner) -> Result<ValueTable> {
    require_side(a, side)?;
    let values = search_values(a.node_count(), a.max_weight(), |v| Ok(solve_fair_mp(a, side, v)?.regions.win1))?;
    Ok(ValueTable::new(values))
}

/// Fair energy game with unknown initial credit and fair nodes owned by `side`.
///
/// With fairness on player 1 the energy gadget decides both regions. With
/// fairness on player 2 player 1 wins exactly the regular energy region,
/// player 2 wins exactly its region of the fair mean-payoff game at threshold
/// 0, and the remaining nodes are won by neither player.
pub fn solve_fair_energy(a: &Arena, side: Owner) -> Result<FairSolveReport> {
    require_side(a, side)?;
    match side {
        Owner::P1 => {
            let g = fair_energy_gadget(a)?;
            let regions = project_regions(&g.solution.regions, &g.map)?;
            Ok(FairSolveReport::new(regions, format!("{} gadget", GadgetKind::FairEnergy1.name())))
        }
        Owner::P2 => {
            let regular = solve_energy(a).regions;
            let win2 = solve_fair_mp(a, Owner::P2, Rational::ZERO)?.regions.win2;
            let undetermined = a
                .nodes()
                .filter(|q| !regular.win1.contains(q) && !win2.contains(q))
                .collect();
            let regions = WinRegions { win2, undetermined, ..regular };
            Ok(FairSolveReport::new(
                regions,
                format!("regular energy for player 1, {} gadget at threshold 0 for player 2", GadgetKind::FairMp2.name()),
            ))
        }
    }
}

/// Solves the game described by `spec`, choosing the regular solver when the
/// arena has no fair edges or the objective has no fairness side.
pub fn solve(a: &Arena, spec: &FairObjectiveSpec) -> Result<FairSolveReport> {
    spec.check(a)?;
    let side = if a.has_fair_edges() { spec.side } else { None };
    match (spec.game, side) {
        (GameKind::MeanPayoff, None) => {
            let regions = solve_mp_threshold(a, spec.threshold)?.regions;
            Ok(FairSolveReport::new(regions, format!("regular mean-payoff at threshold {}", spec.threshold)))
        }
        (GameKind::Energy, None) => Ok(FairSolveReport::new(solve_energy(a).regions, "regular energy".to_string())),
        (GameKind::MeanPayoff, Some(s)) => solve_fair_mp(a, s, spec.threshold),
        (GameKind::Energy, Some(s)) => solve_fair_energy(a, s),
    }
}

/// Optimal mean-payoff values, fair or regular according to the arena.
pub fn values(a: &Arena) -> Result<ValueTable> {
    match a.fairness_side() {
        None => optimal_values(a),
        Some(side) => fair_mp_optimal_values(a, side),
    }
}
