//! Weighted two-player game arenas with an optional set of fair edges.
//!
//! An [`Arena`] is immutable once built. Construction goes through
//! [`ArenaBuilder`], which rejects structural errors (duplicate names,
//! parallel edges, dangling endpoints) eagerly and checks the remaining
//! invariants with [`validate`] when [`ArenaBuilder::build`] is called.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense node index, `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    P1,
    P2,
}

impl Owner {
    pub fn opponent(self) -> Owner {
        match self {
            Owner::P1 => Owner::P2,
            Owner::P2 => Owner::P1,
        }
    }

    /// `p1` / `p2`, as used by the arena format.
    pub fn token(self) -> &'static str {
        match self {
            Owner::P1 => "p1",
            Owner::P2 => "p2",
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::P1 => f.write_str("player 1"),
            Owner::P2 => f.write_str("player 2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: i64,
    pub fair: bool,
}

/// An invariant violation reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The node has no outgoing edge.
    DeadEnd(NodeId),
    /// Fair edges leave nodes of both players; the two witnesses are a
    /// player-1 and a player-2 fair node.
    MixedFairness { p1: NodeId, p2: NodeId },
    /// More than one edge between the same pair of nodes.
    ParallelEdge { src: NodeId, dst: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DeadEnd(q) => write!(f, "node {q} has no outgoing edge"),
            Violation::MixedFairness { p1, p2 } => {
                write!(f, "fair edges leave both player-1 node {p1} and player-2 node {p2}")
            }
            Violation::ParallelEdge { src, dst } => write!(f, "parallel edges {src} -> {dst}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    names: Vec<String>,
    owners: Vec<Owner>,
    edges: Vec<Edge>,
    /// Outgoing edge indices per node, sorted by destination.
    out: Vec<Vec<usize>>,
    max_weight: i64,
}

impl Arena {
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len()).map(NodeId)
    }

    pub fn name(&self, q: NodeId) -> &str {
        &self.names[q.0]
    }

    pub fn owner(&self, q: NodeId) -> Owner {
        self.owners[q.0]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing edges of `q` in ascending destination order.
    pub fn out_edges(&self, q: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.out[q.0].iter().map(move |&i| &self.edges[i])
    }

    pub fn successors(&self, q: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.out_edges(q).map(|e| e.dst)
    }

    /// Destinations of the fair edges leaving `q`, ascending.
    pub fn fair_successors(&self, q: NodeId) -> Vec<NodeId> {
        self.out_edges(q).filter(|e| e.fair).map(|e| e.dst).collect()
    }

    pub fn edge(&self, src: NodeId, dst: NodeId) -> Option<&Edge> {
        let out = &self.out[src.0];
        out.binary_search_by_key(&dst, |&i| self.edges[i].dst)
            .ok()
            .map(|k| &self.edges[out[k]])
    }

    pub fn weight(&self, src: NodeId, dst: NodeId) -> Option<i64> {
        self.edge(src, dst).map(|e| e.weight)
    }

    pub fn is_fair_node(&self, q: NodeId) -> bool {
        self.out_edges(q).any(|e| e.fair)
    }

    pub fn fair_nodes(&self) -> Vec<NodeId> {
        self.nodes().filter(|&q| self.is_fair_node(q)).collect()
    }

    pub fn has_fair_edges(&self) -> bool {
        self.edges.iter().any(|e| e.fair)
    }

    /// Maximum absolute edge weight (the arena's `W`).
    pub fn max_weight(&self) -> i64 {
        self.max_weight
    }

    /// The player owning all fair nodes, or `None` when there are no fair edges.
    pub fn fairness_side(&self) -> Option<Owner> {
        self.edges.iter().find(|e| e.fair).map(|e| self.owner(e.src))
    }

    /// Same nodes and edges, with weights replaced by `f(edge)`.
    pub fn map_weights(&self, mut f: impl FnMut(&Edge) -> Result<i64>) -> Result<Arena> {
        let mut a = self.clone();
        for e in a.edges.iter_mut() {
            e.weight = f(e)?;
        }
        a.max_weight = a.edges.iter().map(|e| e.weight.abs()).max().unwrap_or(0);
        Ok(a)
    }

    /// Copy of the arena with every edge marked regular.
    pub fn without_fairness(&self) -> Arena {
        let mut a = self.clone();
        for e in a.edges.iter_mut() {
            e.fair = false;
        }
        a
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arena v1")?;
        for q in self.nodes() {
            writeln!(f, "node {} {}", self.name(q), self.owner(q).token())?;
        }
        for e in &self.edges {
            write!(f, "edge {} {} {}", self.name(e.src), self.name(e.dst), e.weight)?;
            if e.fair {
                write!(f, " fair")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '#')
}

#[derive(Clone, Debug, Default)]
pub struct ArenaBuilder {
    names: Vec<String>,
    owners: Vec<Owner>,
    by_name: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    pairs: HashMap<(NodeId, NodeId), usize>,
}

impl ArenaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str, owner: Owner) -> Result<NodeId> {
        if !valid_name(name) {
            return Err(Error::InvalidName(name.to_string()));
        }
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateNode(name.to_string()));
        }
        let id = NodeId(self.names.len());
        self.names.push(name.to_string());
        self.owners.push(owner);
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn add_edge(&mut self, src: NodeId, dst: NodeId, weight: i64, fair: bool) -> Result<()> {
        let n = self.names.len();
        for q in [src, dst] {
            if q.0 >= n {
                return Err(Error::DanglingEndpoint(q.to_string()));
            }
        }
        if self.pairs.contains_key(&(src, dst)) {
            return Err(Error::DuplicateEdge {
                src: self.names[src.0].clone(),
                dst: self.names[dst.0].clone(),
            });
        }
        self.pairs.insert((src, dst), self.edges.len());
        self.edges.push(Edge { src, dst, weight, fair });
        Ok(())
    }

    pub fn add_edge_by_name(&mut self, src: &str, dst: &str, weight: i64, fair: bool) -> Result<()> {
        let s = self.node(src).ok_or_else(|| Error::DanglingEndpoint(src.to_string()))?;
        let d = self.node(dst).ok_or_else(|| Error::DanglingEndpoint(dst.to_string()))?;
        self.add_edge(s, d, weight, fair)
    }

    /// Builds without checking [`validate`]; the result may violate invariants.
    pub fn build_unchecked(self) -> Arena {
        let n = self.names.len();
        let mut out = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src.0].push(i);
        }
        for list in out.iter_mut() {
            list.sort_by_key(|&i| self.edges[i].dst);
        }
        let max_weight = self.edges.iter().map(|e| e.weight.abs()).max().unwrap_or(0);
        Arena {
            names: self.names,
            owners: self.owners,
            edges: self.edges,
            out,
            max_weight,
        }
    }

    pub fn build(self) -> Result<Arena> {
        let a = self.build_unchecked();
        let violations = validate(&a);
        if let Some(v) = violations.first() {
            return Err(Error::Invalid(v.to_string()));
        }
        Ok(a)
    }
}

/// Checks the arena invariants; an empty list means the arena is valid.
pub fn validate(a: &Arena) -> Vec<Violation> {
    let mut violations = Vec::new();
    for q in a.nodes() {
        let mut last = None;
        for e in a.out_edges(q) {
            if last == Some(e.dst) {
                violations.push(Violation::ParallelEdge { src: q, dst: e.dst });
            }
            last = Some(e.dst);
        }
        if a.out[q.0].is_empty() {
            violations.push(Violation::DeadEnd(q));
        }
    }
    let fair_of = |o: Owner| a.nodes().find(|&q| a.owner(q) == o && a.is_fair_node(q));
    if let (Some(p1), Some(p2)) = (fair_of(Owner::P1), fair_of(Owner::P2)) {
        violations.push(Violation::MixedFairness { p1, p2 });
    }
    violations
}

/// Parses the line-oriented arena format.
///
/// ```text
/// arena v1
/// node <name> p1|p2
/// edge <src> <dst> <int-weight> [fair]
/// ```
///
/// Everything after `#` on a line is a comment. Nodes may be declared after
/// the edges that mention them.
pub fn parse_arena(text: &str) -> Result<Arena> {
    struct Tok<'a> {
        text: &'a str,
        col: usize,
    }
    let syntax = |line: usize, col: usize, msg: String| Error::Syntax { line, col, msg };

    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (j, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Tok { text: &content[s..j], col: content[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            lines.push((i + 1, toks));
        }
    }

    let Some((first_line, header)) = lines.first() else {
        return Err(syntax(1, 1, "empty input, expected `arena v1`".into()));
    };
    if header.len() != 2 || header[0].text != "arena" || header[1].text != "v1" {
        return Err(syntax(*first_line, 1, "expected `arena v1` header".into()));
    }

    let mut b = ArenaBuilder::new();
    for (line, toks) in &lines[1..] {
        if toks[0].text != "node" {
            continue;
        }
        if toks.len() != 3 {
            return Err(syntax(*line, toks[0].col, "expected `node <name> p1|p2`".into()));
        }
        let owner = match toks[2].text {
            "p1" => Owner::P1,
            "p2" => Owner::P2,
            other => return Err(syntax(*line, toks[2].col, format!("unknown owner `{other}`"))),
        };
        b.add_node(toks[1].text, owner).map_err(|e| syntax(*line, toks[1].col, e.to_string()))?;
    }
    for (line, toks) in &lines[1..] {
        match toks[0].text {
            "node" => {}
            "edge" => {
                if !(4..=5).contains(&toks.len()) {
                    return Err(syntax(*line, toks[0].col, "expected `edge <src> <dst> <weight> [fair]`".into()));
                }
                let fair = match toks.get(4) {
                    None => false,
                    Some(t) if t.text == "fair" => true,
                    Some(t) => return Err(syntax(*line, t.col, format!("unexpected `{}`", t.text))),
                };
                let weight: i64 = toks[3]
                    .text
                    .parse()
                    .map_err(|_| syntax(*line, toks[3].col, format!("bad weight `{}`", toks[3].text)))?;
                let mut ends = [NodeId(0); 2];
                for (k, t) in toks[1..3].iter().enumerate() {
                    ends[k] = b.node(t.text).ok_or_else(|| {
                        syntax(*line, t.col, Error::DanglingEndpoint(t.text.to_string()).to_string())
                    })?;
                }
                b.add_edge(ends[0], ends[1], weight, fair)
                    .map_err(|e| syntax(*line, toks[0].col, e.to_string()))?;
            }
            other => return Err(syntax(*line, toks[0].col, format!("unknown directive `{other}`"))),
        }
    }
    b.build()
}

/// Replaces every weight `w` by `den(v)·w − num(v)`, so that `MP_v` on the
/// input becomes `MP_0` on the output over integers.
pub fn shift_and_scale(a: &Arena, v: Rational) -> Result<Arena> {
    let num = i64::try_from(v.num()).map_err(|_| Error::Overflow)?;
    let den = i64::try_from(v.den()).map_err(|_| Error::Overflow)?;
    a.map_weights(|e| {
        e.weight
            .checked_mul(den)
            .and_then(|x| x.checked_sub(num))
            .ok_or(Error::Overflow)
    })
}

/// Graphviz rendering: player-1 nodes are circles, player-2 nodes squares,
/// fair edges dashed.
pub fn export_dot(a: &Arena) -> String {
    let mut s = String::from("digraph arena {\n");
    for q in a.nodes() {
        let shape = match a.owner(q) {
            Owner::P1 => "circle",
            Owner::P2 => "square",
        };
        let _ = writeln!(s, "  n{} [label=\"{}\", shape={}];", q.0, escape(a.name(q)), shape);
    }
    for e in a.edges() {
        let style = if e.fair { ", style=dashed" } else { "" };
        let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"{}];", e.src.0, e.dst.0, e.weight, style);
    }
    s.push_str("}\n");
    s
}

fn escape(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}
