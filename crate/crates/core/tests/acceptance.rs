//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or exceeds its time limit.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{fair_corpus, fixture, regular_corpus};
use fairgame_core::*;

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ids(v: &[usize]) -> BTreeSet<NodeId> {
    v.iter().map(|&i| NodeId(i)).collect()
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn budget() -> OracleBudget {
    OracleBudget { max_nodes: 5, max_abs_weight: 3 }
}

const MP_THRESHOLDS: [(i128, i128); 5] = [(-1, 1), (-1, 2), (0, 1), (1, 3), (1, 1)];

fn fig1_machine(k: usize) -> StrategyMachine {
    let mut m = StrategyMachine::new(Owner::P1, 2);
    let mut moves = vec![NodeId(0); k];
    moves.push(NodeId(1));
    m.set_cycle(NodeId(0), &moves);
    m.set_move(NodeId(1), NodeId(0));
    m
}

fn fig1_example() -> Outcome {
    let a = fixture("fig1");
    let regular = optimal_values(&a.without_fairness()).map_err(|e| e.to_string())?;
    ensure(regular.iter().all(|(_, v)| v == Rational::ONE), || format!("regular values {regular:?}"))?;
    let spec = FairObjectiveSpec::mean_payoff(Some(Owner::P1), Rational::ZERO);
    let report = solve(&a, &spec).map_err(|e| e.to_string())?;
    ensure(report.regions.win1 == ids(&[0, 1]), || format!("fair win1 {:?}", report.regions.win1))?;
    let fair = fair_mp_optimal_values(&a, Owner::P1).map_err(|e| e.to_string())?;
    ensure(fair.iter().all(|(_, v)| v == Rational::ONE), || format!("fair values {fair:?}"))?;

    let idle = StrategyMachine::new(Owner::P2, 2);
    let four = simulate(&a, &fig1_machine(4), &idle, NodeId(0)).map_err(|e| e.to_string())?;
    ensure(four.cycle_mean == Rational::ZERO && four.fair_on_cycle, || format!("k=4 lasso {four:?}"))?;
    let verdict = verify_machine(&a, &fig1_machine(4), &spec, &[NodeId(0), NodeId(1)]).map_err(|e| e.to_string())?;
    ensure(verdict == Verdict::Verified, || format!("k=4 verdict {verdict:?}"))?;
    let three = simulate(&a, &fig1_machine(3), &idle, NodeId(0)).map_err(|e| e.to_string())?;
    ensure(three.cycle_mean == r(-1, 5), || format!("k=3 lasso {three:?}"))?;
    match verify_machine(&a, &fig1_machine(3), &spec, &[NodeId(0)]).map_err(|e| e.to_string())? {
        Verdict::CounterPlay(l) if l.cycle_mean == r(-1, 5) => Ok(()),
        other => Err(format!("k=3 verdict {other:?}")),
    }
}

fn fig3_example() -> Outcome {
    let a = fixture("fig3");
    let q = a.node_by_name("q").unwrap();
    let q2 = a.node_by_name("q'").unwrap();
    let fair = solve(&a, &FairObjectiveSpec::energy(Some(Owner::P2))).map_err(|e| e.to_string())?.regions;
    ensure(
        fair.win1 == BTreeSet::from([q2]) && fair.win2.is_empty() && fair.undetermined == BTreeSet::from([q]),
        || format!("2-fair energy {fair:?}"),
    )?;
    let regular = solve_energy(&a).regions;
    ensure(regular.win2 == BTreeSet::from([q]), || format!("regular energy {regular:?}"))
}

fn zero_cycle_pair() -> Outcome {
    let single = parse_arena("arena v1\nnode q p1\nedge q q 0 fair\n").map_err(|e| e.to_string())?;
    let pair = fixture("zero_pair");
    let q = NodeId(0);
    let energy = FairObjectiveSpec::energy(Some(Owner::P1));
    let mp = FairObjectiveSpec::mean_payoff(Some(Owner::P1), Rational::ZERO);
    let e1 = solve(&single, &energy).map_err(|e| e.to_string())?.regions;
    ensure(e1.win1.contains(&q), || format!("single loop energy {e1:?}"))?;
    let e2 = solve(&pair, &energy).map_err(|e| e.to_string())?.regions;
    ensure(e2.win2.contains(&q), || format!("pair energy {e2:?}"))?;
    for (name, a) in [("single", &single), ("pair", &pair)] {
        let m = solve(a, &mp).map_err(|e| e.to_string())?.regions;
        ensure(m.win1.contains(&q), || format!("{name} mean-payoff {m:?}"))?;
    }
    Ok(())
}

fn gadget_bounds() -> Outcome {
    for seed in 0..500u64 {
        let side = if seed % 2 == 0 { Owner::P1 } else { Owner::P2 };
        let params = GenParams {
            nodes: 1 + (seed as usize % 8),
            max_weight: 1 + (seed as i64 / 8) % 5,
            fair: Some(side),
            density: 0.4,
            seed,
        };
        let a = random_arena(&params);
        let n = a.node_count();
        let w = a.max_weight();
        let kinds: &[GadgetKind] = match side {
            Owner::P1 => &[GadgetKind::FairMp1, GadgetKind::FairEnergy1],
            Owner::P2 => &[GadgetKind::FairMp2],
        };
        for &kind in kinds {
            let (g, _) = build_gadget(&a, kind).map_err(|e| e.to_string())?;
            let nodes_ok = g.node_count() <= GadgetMap::node_bound(kind, n);
            let weight_ok = g.max_weight() as i128 <= GadgetMap::weight_bound(kind, n, w);
            let (nb, wb) = match kind {
                GadgetKind::FairMp1 | GadgetKind::FairMp2 => (6 * n, (n * n) as i128 * w as i128 + n as i128),
                GadgetKind::FairEnergy1 => (8 * n, ((n * n) as i128 * w as i128 + n as i128) * (n as i128 + 1)),
            };
            ensure(nodes_ok && weight_ok && g.node_count() <= nb && g.max_weight() as i128 <= wb, || {
                format!("seed {seed} {}: {} nodes, weight {}", kind.name(), g.node_count(), g.max_weight())
            })?;
        }
    }
    Ok(())
}

fn fair_oracle_equivalence() -> Outcome {
    for side in [Owner::P1, Owner::P2] {
        for a in fair_corpus(side, 200, 5, 3) {
            let mut specs: Vec<FairObjectiveSpec> =
                MP_THRESHOLDS.iter().map(|&(n, d)| FairObjectiveSpec::mean_payoff(Some(side), r(n, d))).collect();
            specs.push(FairObjectiveSpec::energy(Some(side)));
            for spec in specs {
                let got = solve(&a, &spec).map_err(|e| e.to_string())?.regions;
                let want = oracle_fair(&a, &spec, &budget()).map_err(|e| e.to_string())?;
                ensure(
                    (&got.win1, &got.win2, &got.undetermined) == (&want.win1, &want.win2, &want.undetermined),
                    || format!("{spec:?} on\n{a}solver {got:?}\noracle {want:?}"),
                )?;
            }
            let got: Vec<Rational> =
                fair_mp_optimal_values(&a, side).map_err(|e| e.to_string())?.iter().map(|(_, v)| v).collect();
            let want = oracle_fair_values(&a, side, &budget()).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("fair values on\n{a}solver {got:?}\noracle {want:?}"))?;
        }
    }
    Ok(())
}

fn regular_oracle_equivalence() -> Outcome {
    for a in regular_corpus(200, 5, 3) {
        for (n, d) in [(-1, 1), (0, 1), (1, 1)] {
            let got = solve_mp_threshold(&a, r(n, d)).map_err(|e| e.to_string())?.regions;
            let want = oracle_regular(&a, GameKind::MeanPayoff, r(n, d), &budget()).map_err(|e| e.to_string())?;
            ensure((&got.win1, &got.win2) == (&want.win1, &want.win2), || format!("threshold {n}/{d} on\n{a}"))?;
        }
        let got = solve_energy(&a).regions;
        let want = oracle_regular(&a, GameKind::Energy, Rational::ZERO, &budget()).map_err(|e| e.to_string())?;
        ensure((&got.win1, &got.win2, &got.credit) == (&want.win1, &want.win2, &want.credit), || {
            format!("energy on\n{a}solver {got:?}\noracle {want:?}")
        })?;
        let got: Vec<Rational> = optimal_values(&a).map_err(|e| e.to_string())?.iter().map(|(_, v)| v).collect();
        let want = oracle_values(&a, &budget()).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("values on\n{a}solver {got:?}\noracle {want:?}"))?;
    }
    Ok(())
}

fn coincidence_and_decomposition() -> Outcome {
    for a in regular_corpus(200, 5, 3) {
        let mp = solve_mp_threshold(&a, Rational::ZERO).map_err(|e| e.to_string())?.regions.win1;
        let energy = solve_energy(&a).regions.win1;
        ensure(mp == energy, || format!("mean-payoff 0 and energy differ on\n{a}"))?;
    }
    for a in fair_corpus(Owner::P2, 200, 5, 3) {
        let fair = solve_fair_energy(&a, Owner::P2).map_err(|e| e.to_string())?.regions;
        let regular = solve_energy(&a).regions;
        let mp2 = solve_fair_mp(&a, Owner::P2, Rational::ZERO).map_err(|e| e.to_string())?.regions;
        ensure(fair.win1 == regular.win1, || format!("win1 differs from regular energy on\n{a}"))?;
        ensure(fair.win2 == mp2.win2, || format!("win2 differs from fair mean-payoff on\n{a}"))?;

        let oracle_fair_energy =
            oracle_fair(&a, &FairObjectiveSpec::energy(Some(Owner::P2)), &budget()).map_err(|e| e.to_string())?;
        let oracle_regular_energy =
            oracle_regular(&a, GameKind::Energy, Rational::ZERO, &budget()).map_err(|e| e.to_string())?;
        let oracle_mp2 = oracle_fair(&a, &FairObjectiveSpec::mean_payoff(Some(Owner::P2), Rational::ZERO), &budget())
            .map_err(|e| e.to_string())?;
        ensure(oracle_fair_energy.win1 == oracle_regular_energy.win1, || format!("oracle win1 split on\n{a}"))?;
        ensure(oracle_fair_energy.win2 == oracle_mp2.win2, || format!("oracle win2 split on\n{a}"))?;
        ensure(fair.win1 == oracle_fair_energy.win1 && fair.win2 == oracle_fair_energy.win2, || {
            format!("solver and oracle differ on\n{a}")
        })?;
    }
    Ok(())
}

fn determinacy_suite() -> Outcome {
    let mut undetermined_seen = 0usize;
    let mut corpus: Vec<Arena> = vec![fixture("fig3")];
    corpus.extend(fair_corpus(Owner::P1, 200, 5, 3));
    corpus.extend(fair_corpus(Owner::P2, 200, 5, 3));
    for a in &corpus {
        let side = a.fairness_side().expect("corpus arenas have fair edges");
        for &(n, d) in &MP_THRESHOLDS {
            let report = solve_fair_mp(a, side, r(n, d)).map_err(|e| e.to_string())?;
            ensure(check_determinacy(&report) == Determinacy::Determined, || format!("fair mean-payoff on\n{a}"))?;
        }
        let report = solve_fair_energy(a, side).map_err(|e| e.to_string())?;
        match (side, check_determinacy(&report)) {
            (Owner::P1, Determinacy::NotDetermined(_)) => return Err(format!("1-fair energy on\n{a}")),
            (Owner::P2, Determinacy::NotDetermined(_)) => undetermined_seen += 1,
            _ => {}
        }
    }
    let fig3 = solve_fair_energy(&corpus[0], Owner::P2).map_err(|e| e.to_string())?;
    ensure(matches!(check_determinacy(&fig3), Determinacy::NotDetermined(_)), || "fig3 is determined".into())?;
    ensure(undetermined_seen > 0, || "no undetermined 2-fair energy arena".into())
}

fn strategy_verification() -> Outcome {
    let epsilon = r(1, 10);
    let mut corpus = regular_corpus(100, 4, 2);
    corpus.extend(fair_corpus(Owner::P1, 100, 4, 2));
    corpus.extend(fair_corpus(Owner::P2, 100, 4, 2));
    for a in &corpus {
        let mut specs: Vec<FairObjectiveSpec> = [(-1, 1), (0, 1), (1, 1)]
            .iter()
            .map(|&(n, d)| FairObjectiveSpec::for_arena(a, GameKind::MeanPayoff, r(n, d)))
            .collect();
        specs.push(FairObjectiveSpec::for_arena(a, GameKind::Energy, Rational::ZERO));
        for spec in specs {
            for player in [Owner::P1, Owner::P2] {
                let s = synthesize(a, &spec, player).map_err(|e| e.to_string())?;
                if s.region.is_empty() {
                    continue;
                }
                let (machine, target) = match &s.strategy {
                    SynthesizedStrategy::Machine(m) => (m.clone(), spec),
                    SynthesizedStrategy::Schedule(sched) => (
                        sched.finitize(epsilon).map_err(|e| e.to_string())?,
                        FairObjectiveSpec { threshold: spec.threshold - epsilon, ..spec },
                    ),
                };
                let starts: Vec<NodeId> = s.region.iter().copied().collect();
                let verdict = verify_machine(a, &machine, &target, &starts).map_err(|e| e.to_string())?;
                ensure(verdict == Verdict::Verified, || format!("{spec:?} {player} on\n{a}{verdict:?}"))?;
            }
        }
    }

    let a = fixture("fig1");
    let spec = FairObjectiveSpec::mean_payoff(Some(Owner::P1), Rational::ONE);
    let s = synthesize(&a, &spec, Owner::P1).map_err(|e| e.to_string())?;
    let SynthesizedStrategy::Schedule(sched) = &s.strategy else {
        return Err("fig1 did not yield a schedule".into());
    };
    let machine = sched.finitize(epsilon).map_err(|e| e.to_string())?;
    let target = FairObjectiveSpec::mean_payoff(Some(Owner::P1), r(9, 10));
    let verdict = verify_machine(&a, &machine, &target, &[NodeId(0), NodeId(1)]).map_err(|e| e.to_string())?;
    ensure(verdict == Verdict::Verified, || format!("finitized fig1 machine: {verdict:?}"))?;
    let lasso = simulate(&a, &machine, &StrategyMachine::new(Owner::P2, 2), NodeId(0)).map_err(|e| e.to_string())?;
    ensure(lasso.cycle_mean >= r(9, 10), || format!("finitized fig1 mean {}", lasso.cycle_mean))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("fig1 example", Duration::from_secs(1), fig1_example),
        ("fig3 example", Duration::from_secs(1), fig3_example),
        ("zero-cycle pair", Duration::from_secs(1), zero_cycle_pair),
        ("gadget size and weight bounds", Duration::from_secs(10), gadget_bounds),
        ("fair solvers match the oracle", Duration::from_secs(300), fair_oracle_equivalence),
        ("regular solvers match the oracle", Duration::from_secs(120), regular_oracle_equivalence),
        ("coincidence and decomposition", Duration::from_secs(60), coincidence_and_decomposition),
        ("determinacy", Duration::from_secs(60), determinacy_suite),
        ("strategy verification", Duration::from_secs(60), strategy_verification),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
        });
        match outcome {
            Ok(()) => println!("PASS criterion {} ({name}) in {elapsed:.2?}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}) in {elapsed:.2?}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
