//! Regular mean-payoff games, reduced to energy games.

use std::collections::{BTreeMap, BTreeSet};

use crate::arena::{shift_and_scale, Arena, NodeId};
use crate::energy::{solve_energy, EnergySolution};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Optimal value per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    values: Vec<Rational>,
}

impl ValueTable {
    pub fn new(values: Vec<Rational>) -> Self {
        ValueTable { values }
    }

    pub fn get(&self, q: NodeId) -> Rational {
        self.values[q.0]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Rational)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (NodeId(i), v))
    }

    pub fn to_map(&self) -> BTreeMap<NodeId, Rational> {
        self.iter().collect()
    }
}

/// Decides `avg ≥ v` by solving the energy game on the weights shifted by `v`.
///
/// The regions carry no credits; the strategies are those of the shifted
/// energy game.
pub fn solve_mp_threshold(a: &Arena, v: Rational) -> Result<EnergySolution> {
    let mut sol = solve_energy(&shift_and_scale(a, v)?);
    sol.regions.credit.clear();
    Ok(sol)
}

/// Largest threshold each node wins, by bisection on the threshold.
pub fn optimal_values(a: &Arena) -> Result<ValueTable> {
    let values = search_values(a.node_count(), a.max_weight(), |v| {
        Ok(solve_mp_threshold(a, v)?.regions.win1)
    })?;
    Ok(ValueTable::new(values))
}

/// Shared bisection for threshold games whose values are rationals in
/// `[-max_weight, max_weight]` with denominator at most `n`.
///
/// `win1_at(v)` returns the nodes player 1 wins at threshold `v`; it must be
/// antitone in `v`. Nodes whose current brackets coincide share probes. Each
/// probe is the simplest rational in the middle half of the bracket, which
/// keeps the shifted weights small, and bracketing stops once the width drops
/// below `1/n²`, where at most one candidate value remains.
pub(crate) fn search_values(
    n: usize,
    max_weight: i64,
    mut win1_at: impl FnMut(Rational) -> Result<BTreeSet<NodeId>>,
) -> Result<Vec<Rational>> {
    let mut values = vec![Rational::ZERO; n];
    if n == 0 {
        return Ok(values);
    }
    let w = Rational::from(max_weight);
    let resolution = Rational::new(1, (n * n) as i128);
    let mut pending: BTreeMap<(Rational, Rational), Vec<NodeId>> = BTreeMap::new();
    pending.insert((-w, w + Rational::ONE), (0..n).map(NodeId).collect());

    while let Some(((lo, hi), nodes)) = pending.pop_first() {
        let width = hi - lo;
        if width < resolution {
            let v = Rational::simplest_in(lo, hi).expect("bracket is nonempty");
            if v.den() > n as i128 {
                return Err(Error::ValueRecovery {
                    node: nodes[0],
                    msg: format!("no value with denominator at most {n} in [{lo}, {hi})"),
                });
            }
            for q in nodes {
                values[q.0] = v;
            }
            continue;
        }
        let quarter = width / Rational::integer(4);
        let mid = Rational::simplest_in(lo + quarter, hi - quarter).expect("bracket is nonempty");
        let win = win1_at(mid)?;
        let (up, down): (Vec<NodeId>, Vec<NodeId>) = nodes.into_iter().partition(|q| win.contains(q));
        if !up.is_empty() {
            pending.entry((mid, hi)).or_default().extend(up);
        }
        if !down.is_empty() {
            pending.entry((lo, mid)).or_default().extend(down);
        }
    }
    Ok(values)
}
