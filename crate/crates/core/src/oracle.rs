//! Brute-force ground truth for tiny arenas.
//!
//! Regular games are decided by enumerating positional strategy pairs and
//! evaluating the resulting lassos. Fair games enumerate positional strategies
//! of the player without fairness obligations; the remaining one-player graph
//! is decided by looking at every strongly connected, fair-closed node set the
//! fair player could end up visiting forever.
//!
//! Nothing here shares code with the solvers.

use crate::arena::{Arena, NodeId, Owner};
use crate::energy::WinRegions;
use crate::error::{Error, Result};
use crate::fair::{FairObjectiveSpec, GameKind};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_nodes: usize,
    pub max_abs_weight: i64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_nodes: 6, max_abs_weight: 3 }
    }
}

impl OracleBudget {
    pub fn check(&self, a: &Arena) -> Result<()> {
        if a.node_count() > self.max_nodes {
            return Err(Error::Budget(format!("{} nodes, at most {} allowed", a.node_count(), self.max_nodes)));
        }
        if a.max_weight() > self.max_abs_weight {
            return Err(Error::Budget(format!(
                "weights up to {}, at most {} allowed",
                a.max_weight(),
                self.max_abs_weight
            )));
        }
        Ok(())
    }
}

/// All positional strategies of `owner`, as a successor per node (`None`
/// for nodes of the other player).
fn strategies(a: &Arena, owner: Owner) -> Vec<Vec<Option<usize>>> {
    let mut all = vec![vec![None; a.node_count()]];
    for q in a.nodes().filter(|&q| a.owner(q) == owner) {
        let succs: Vec<usize> = a.successors(q).map(|s| s.0).collect();
        all = all
            .into_iter()
            .flat_map(|base| {
                succs.iter().map(move |&s| {
                    let mut next = base.clone();
                    next[q.0] = Some(s);
                    next
                })
            })
            .collect();
    }
    all
}

/// The lasso of a play where every node has exactly one successor.
struct Lasso {
    cycle_weight: i64,
    cycle_len: usize,
    /// Lowest running weight over the prefix followed by one cycle.
    min_running: i64,
}

fn lasso(a: &Arena, next: &[usize], start: usize) -> Lasso {
    let mut seen = vec![usize::MAX; next.len()];
    let mut path = Vec::new();
    let mut q = start;
    while seen[q] == usize::MAX {
        seen[q] = path.len();
        path.push(q);
        q = next[q];
    }
    let loop_start = seen[q];
    let w = |i: usize| a.weight(NodeId(path[i]), NodeId(next[path[i]])).expect("strategy moves are edges");
    let (mut running, mut min_running) = (0i64, 0i64);
    for i in 0..path.len() {
        running += w(i);
        min_running = min_running.min(running);
    }
    let cycle_weight = (loop_start..path.len()).map(w).sum();
    Lasso { cycle_weight, cycle_len: path.len() - loop_start, min_running }
}

fn combine(sigma: &[Option<usize>], pi: &[Option<usize>]) -> Vec<usize> {
    sigma.iter().zip(pi).map(|(s, p)| s.or(*p).expect("every node has an owner")).collect()
}

fn mean(l: &Lasso) -> Rational {
    Rational::new(l.cycle_weight as i128, l.cycle_len as i128)
}

/// Regions of the regular game (fairness ignored) with objective `avg ≥ v`
/// for mean-payoff or unknown initial credit for energy. Energy regions carry
/// the minimal credits.
pub fn oracle_regular(a: &Arena, game: GameKind, v: Rational, budget: &OracleBudget) -> Result<WinRegions> {
    budget.check(a)?;
    let n = a.node_count();
    let sigmas = strategies(a, Owner::P1);
    let pis = strategies(a, Owner::P2);
    let mut best_credit: Vec<Option<i64>> = vec![None; n];
    for sigma in &sigmas {
        let mut wins = vec![true; n];
        let mut need = vec![0i64; n];
        for pi in &pis {
            let next = combine(sigma, pi);
            for q in 0..n {
                if !wins[q] {
                    continue;
                }
                let l = lasso(a, &next, q);
                let ok = match game {
                    GameKind::MeanPayoff => mean(&l) >= v,
                    GameKind::Energy => l.cycle_weight >= 0,
                };
                if ok {
                    need[q] = need[q].max(-l.min_running);
                } else {
                    wins[q] = false;
                }
            }
        }
        for q in 0..n {
            if wins[q] {
                best_credit[q] = Some(best_credit[q].map_or(need[q], |c| c.min(need[q])));
            }
        }
    }
    let mut r = WinRegions::from_win1(n, (0..n).filter(|&q| best_credit[q].is_some()).map(NodeId));
    if game == GameKind::Energy {
        r.credit = (0..n).filter_map(|q| best_credit[q].map(|c| (NodeId(q), c))).collect();
    }
    Ok(r)
}

/// Optimal mean-payoff values of the regular game: the best cycle mean
/// player 1 can guarantee with a positional strategy against every
/// positional reply.
pub fn oracle_values(a: &Arena, budget: &OracleBudget) -> Result<Vec<Rational>> {
    budget.check(a)?;
    let n = a.node_count();
    let pis = strategies(a, Owner::P2);
    let mut best = vec![None::<Rational>; n];
    for sigma in strategies(a, Owner::P1) {
        let mut worst = vec![None::<Rational>; n];
        for pi in &pis {
            let next = combine(&sigma, pi);
            for (q, slot) in worst.iter_mut().enumerate() {
                let m = mean(&lasso(a, &next, q));
                *slot = Some(slot.map_or(m, |x| x.min(m)));
            }
        }
        for q in 0..n {
            let w = worst[q].expect("player 2 has at least one strategy");
            best[q] = Some(best[q].map_or(w, |b| b.max(w)));
        }
    }
    Ok(best.into_iter().map(|b| b.expect("player 1 has at least one strategy")).collect())
}

/// The one-player graph left once the non-fair player fixes a positional
/// strategy, with every simple cycle and every candidate end component.
struct OnePlayer<'a> {
    arena: &'a Arena,
    /// `adj[u][v]` is the weight of the edge `u -> v` if it survives.
    adj: Vec<Vec<Option<i64>>>,
    reach: Vec<Vec<bool>>,
    cycles: Vec<Vec<usize>>,
}

impl<'a> OnePlayer<'a> {
    fn new(a: &'a Arena, fixed: &[Option<usize>]) -> Self {
        let n = a.node_count();
        let mut adj = vec![vec![None; n]; n];
        for e in a.edges() {
            if fixed[e.src.0].is_none_or(|s| s == e.dst.0) {
                adj[e.src.0][e.dst.0] = Some(e.weight);
            }
        }
        let mut reach: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| u == v || adj[u][v].is_some()).collect()).collect();
        for k in 0..n {
            for u in 0..n {
                for v in 0..n {
                    if reach[u][k] && reach[k][v] {
                        reach[u][v] = true;
                    }
                }
            }
        }
        let mut me = OnePlayer { arena: a, adj, reach, cycles: Vec::new() };
        me.cycles = me.simple_cycles();
        me
    }

    /// Simple cycles, each listed once starting from its smallest node.
    fn simple_cycles(&self) -> Vec<Vec<usize>> {
        fn extend(g: &OnePlayer, path: &mut Vec<usize>, on: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            let (first, last) = (path[0], *path.last().unwrap());
            for v in 0..g.adj.len() {
                if g.adj[last][v].is_none() || v < first {
                    continue;
                }
                if v == first {
                    out.push(path.clone());
                } else if !on[v] {
                    on[v] = true;
                    path.push(v);
                    extend(g, path, on, out);
                    path.pop();
                    on[v] = false;
                }
            }
        }
        let n = self.adj.len();
        let mut out = Vec::new();
        for s in 0..n {
            let mut on = vec![false; n];
            on[s] = true;
            extend(self, &mut vec![s], &mut on, &mut out);
        }
        out
    }

    fn cycle_weight(&self, c: &[usize]) -> i64 {
        (0..c.len()).map(|i| self.adj[c[i]][c[(i + 1) % c.len()]].unwrap()).sum()
    }

    /// Node sets that a fair play can visit forever: strongly connected with
    /// at least one edge, and containing every fair successor of its nodes.
    fn end_components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let inside = |v: usize| mask & (1 << v) != 0;
            let fair_closed = set.iter().all(|&u| {
                self.arena.fair_successors(NodeId(u)).iter().all(|f| inside(f.0))
            });
            if fair_closed && self.strongly_connected(&set, &|u, v| inside(u) && inside(v) && self.adj[u][v].is_some()) {
                out.push(set);
            }
        }
        out
    }

    /// Whether `set` is strongly connected using the edges allowed by `edge`,
    /// with at least one edge.
    fn strongly_connected(&self, set: &[usize], edge: &dyn Fn(usize, usize) -> bool) -> bool {
        let n = self.adj.len();
        let sweep = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![set[0]];
            seen[set[0]] = true;
            while let Some(u) = stack.pop() {
                for &v in set {
                    let ok = if forward { edge(u, v) } else { edge(v, u) };
                    if ok && !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            set.iter().all(|&v| seen[v])
        };
        let has_edge = set.iter().any(|&u| set.iter().any(|&v| edge(u, v)));
        has_edge && sweep(true) && sweep(false)
    }

    fn cycles_in<'s>(&'s self, set: &'s [usize]) -> impl Iterator<Item = &'s Vec<usize>> + 's {
        self.cycles.iter().filter(move |c| c.iter().all(|v| set.contains(v)))
    }

    /// Whether the fair player can stay in `set` forever with a fair play whose
    /// energy is bounded from below.
    fn energy_bounded(&self, set: &[usize]) -> bool {
        if self.cycles_in(set).any(|c| self.cycle_weight(c) > 0) {
            return true;
        }
        // No positive cycle: the best closed walks have weight 0 and may only
        // use edges lying on some zero-weight cycle.
        let n = self.adj.len();
        let mut best = vec![vec![None::<i64>; n]; n];
        for &u in set {
            best[u][u] = Some(0);
            for &v in set {
                if let Some(w) = self.adj[u][v] {
                    best[u][v] = Some(best[u][v].map_or(w, |x: i64| x.max(w)));
                }
            }
        }
        for &k in set {
            for &u in set {
                for &v in set {
                    if let (Some(x), Some(y)) = (best[u][k], best[k][v]) {
                        if best[u][v].is_none_or(|b| b < x + y) {
                            best[u][v] = Some(x + y);
                        }
                    }
                }
            }
        }
        let zero = |u: usize, v: usize| {
            set.contains(&u)
                && set.contains(&v)
                && matches!((self.adj[u][v], best[v][u]), (Some(w), Some(back)) if w + back == 0)
        };
        let fair_edges_zero = set.iter().all(|&u| self.arena.fair_successors(NodeId(u)).iter().all(|f| zero(u, f.0)));
        fair_edges_zero && self.strongly_connected(set, &zero)
    }
}

/// Regions of the fair game described by `spec`.
pub fn oracle_fair(a: &Arena, spec: &FairObjectiveSpec, budget: &OracleBudget) -> Result<WinRegions> {
    budget.check(a)?;
    spec.check(a)?;
    let Some(side) = spec.side else {
        return oracle_regular(a, spec.game, spec.threshold, budget);
    };
    let n = a.node_count();
    let v = spec.threshold;
    let below = |g: &OnePlayer, c: &Vec<usize>| Rational::new(g.cycle_weight(c) as i128, c.len() as i128) < v;

    // For each strategy of the non-fair player: which starts the fair player wins.
    let mut outcomes: Vec<Vec<bool>> = Vec::new();
    // 2-fair energy only: starts from which the strategy avoids every negative cycle.
    let mut safe: Vec<Vec<bool>> = Vec::new();
    for fixed in strategies(a, side.opponent()) {
        let g = OnePlayer::new(a, &fixed);
        let winning_sets: Vec<Vec<usize>> = g
            .end_components()
            .into_iter()
            .filter(|s| match (spec.game, side) {
                (GameKind::MeanPayoff, Owner::P1) => g.cycles_in(s).any(|c| !below(&g, c)),
                (GameKind::MeanPayoff, Owner::P2) => g.cycles_in(s).any(|c| below(&g, c)),
                (GameKind::Energy, Owner::P1) => g.energy_bounded(s),
                (GameKind::Energy, Owner::P2) => g.cycles_in(s).any(|c| g.cycle_weight(c) < 0),
            })
            .collect();
        outcomes.push((0..n).map(|q| winning_sets.iter().any(|s| s.iter().any(|&t| g.reach[q][t]))).collect());
        if spec.game == GameKind::Energy && side == Owner::P2 {
            let negative: Vec<&Vec<usize>> = g.cycles.iter().filter(|c| g.cycle_weight(c) < 0).collect();
            safe.push((0..n).map(|q| !negative.iter().any(|c| g.reach[q][c[0]])).collect());
        }
    }

    let fair_wins_always = |q: usize| outcomes.iter().all(|o| o[q]);
    let mut r = WinRegions::default();
    for q in (0..n).map(NodeId) {
        let target = match (spec.game, side) {
            (GameKind::Energy, Owner::P2) => {
                if safe.iter().any(|s| s[q.0]) {
                    &mut r.win1
                } else if fair_wins_always(q.0) {
                    &mut r.win2
                } else {
                    &mut r.undetermined
                }
            }
            (_, Owner::P1) if fair_wins_always(q.0) => &mut r.win1,
            (_, Owner::P1) => &mut r.win2,
            (_, Owner::P2) if fair_wins_always(q.0) => &mut r.win2,
            (_, Owner::P2) => &mut r.win1,
        };
        target.insert(q);
    }
    Ok(r)
}

/// Optimal values of the fair mean-payoff game on an arena whose fair nodes
/// belong to `side`.
pub fn oracle_fair_values(a: &Arena, side: Owner, budget: &OracleBudget) -> Result<Vec<Rational>> {
    budget.check(a)?;
    FairObjectiveSpec::mean_payoff(Some(side), Rational::ZERO).check(a)?;
    let n = a.node_count();
    let mut result: Vec<Option<Rational>> = vec![None; n];
    for fixed in strategies(a, side.opponent()) {
        let g = OnePlayer::new(a, &fixed);
        let means = |s: &Vec<usize>| -> Vec<Rational> {
            g.cycles_in(s).map(|c| Rational::new(g.cycle_weight(c) as i128, c.len() as i128)).collect()
        };
        let sets: Vec<(Vec<usize>, Rational)> = g
            .end_components()
            .into_iter()
            .map(|s| {
                let m = means(&s);
                let best = match side {
                    Owner::P1 => m.iter().max(),
                    Owner::P2 => m.iter().min(),
                };
                let best = *best.expect("strongly connected sets contain a cycle");
                (s, best)
            })
            .collect();
        for (q, slot) in result.iter_mut().enumerate() {
            let reachable = sets.iter().filter(|(s, _)| s.iter().any(|&t| g.reach[q][t])).map(|(_, m)| *m);
            let achieved = match side {
                Owner::P1 => reachable.max(),
                Owner::P2 => reachable.min(),
            }
            .expect("some end component is reachable");
            *slot = Some(match (side, *slot) {
                (_, None) => achieved,
                (Owner::P1, Some(x)) => x.min(achieved),
                (Owner::P2, Some(x)) => x.max(achieved),
            });
        }
    }
    Ok(result.into_iter().map(|x| x.expect("at least one strategy")).collect())
}
