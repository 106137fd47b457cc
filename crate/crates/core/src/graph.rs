//! Weighted digraph utilities for strategy verification.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Arc {
    pub to: usize,
    pub weight: i64,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Graph {
    pub adj: Vec<Vec<Arc>>,
}

impl Graph {
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<i64> {
        self.adj[u].iter().find(|a| a.to == v).map(|a| a.weight)
    }

    /// Weight of the closed walk `cycle[0] -> ... -> cycle[last] -> cycle[0]`.
    pub fn cycle_weight(&self, cycle: &[usize]) -> i64 {
        let k = cycle.len();
        (0..k).map(|i| self.weight(cycle[i], cycle[(i + 1) % k]).expect("cycle follows arcs")).sum()
    }
}

/// Strongly connected components of the subgraph with the given nodes and
/// arcs. Only components containing at least one arc are returned.
pub(crate) fn nontrivial_sccs(g: &Graph, alive: &[bool], arc_ok: &dyn Fn(usize, &Arc) -> bool) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut out = Vec::new();
    let ok = |u: usize, a: &Arc| alive[a.to] && arc_ok(u, a);

    for root in (0..n).filter(|&v| alive[v]) {
        if index[root] != usize::MAX {
            continue;
        }
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut next)) = frames.last_mut() {
            if *next < g.adj[u].len() {
                let a = g.adj[u][*next];
                *next += 1;
                if !ok(u, &a) {
                    continue;
                }
                let v = a.to;
                if index[v] == usize::MAX {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    frames.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _)) = frames.last() {
                    low[p] = low[p].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut comp = Vec::new();
                    loop {
                        let v = stack.pop().expect("component root is on the stack");
                        on_stack[v] = false;
                        comp.push(v);
                        if v == u {
                            break;
                        }
                    }
                    let has_arc = comp.len() > 1 || g.adj[u].iter().any(|a| a.to == u && ok(u, a));
                    if has_arc {
                        comp.sort_unstable();
                        out.push(comp);
                    }
                }
            }
        }
    }
    out
}

/// Shortest (fewest arcs) path from `from` to a node satisfying `goal`, using
/// arcs accepted by `arc_ok`. The path lists nodes including both ends.
pub(crate) fn bfs_path(
    g: &Graph,
    from: usize,
    goal: &dyn Fn(usize) -> bool,
    arc_ok: &dyn Fn(usize, &Arc) -> bool,
) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; g.len()];
    let mut seen = vec![false; g.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        if goal(u) {
            let mut path = vec![u];
            let mut x = u;
            while x != from {
                x = parent[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for a in &g.adj[u] {
            if !seen[a.to] && arc_ok(u, a) {
                seen[a.to] = true;
                parent[a.to] = u;
                queue.push_back(a.to);
            }
        }
    }
    None
}

/// A cycle of the parent graph, if any, in forward arc order.
fn parent_cycle(parent: &[usize]) -> Option<Vec<usize>> {
    let n = parent.len();
    let mut state = vec![0u8; n];
    for s in 0..n {
        if state[s] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = s;
        while v != usize::MAX && state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = parent[v];
        }
        if v != usize::MAX && state[v] == 1 {
            let pos = path.iter().position(|&x| x == v).expect("node on current path");
            let mut cycle: Vec<usize> = path[pos..].to_vec();
            cycle.reverse();
            for &x in &path {
                state[x] = 2;
            }
            return Some(cycle);
        }
        for &x in &path {
            state[x] = 2;
        }
    }
    None
}

/// A simple cycle inside `members` whose weight under `cost` is negative.
///
/// Queue-based Bellman-Ford from a virtual source connected to every member,
/// inspecting the parent graph after every round of `|members|` relaxations.
pub(crate) fn negative_cycle(g: &Graph, members: &[bool], cost: &dyn Fn(i64) -> i128) -> Option<Vec<usize>> {
    let n = g.len();
    let size = members.iter().filter(|&&m| m).count().max(1);
    let mut dist = vec![0i128; n];
    let mut parent = vec![usize::MAX; n];
    let mut queued = members.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| members[v]).collect();
    let mut relaxations = 0usize;
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        for a in &g.adj[u] {
            if !members[a.to] {
                continue;
            }
            let nd = dist[u] + cost(a.weight);
            if nd < dist[a.to] {
                dist[a.to] = nd;
                parent[a.to] = u;
                relaxations += 1;
                if relaxations.is_multiple_of(size) {
                    if let Some(c) = parent_cycle(&parent) {
                        return Some(c);
                    }
                }
                if !queued[a.to] {
                    queued[a.to] = true;
                    queue.push_back(a.to);
                }
            }
        }
    }
    None
}

/// A simple cycle inside `members` with weight `>= 0`.
pub(crate) fn nonnegative_cycle(g: &Graph, members: &[bool]) -> Option<Vec<usize>> {
    let k = members.iter().filter(|&&m| m).count() as i128 + 1;
    negative_cycle(g, members, &|w| -(w as i128 * k) - 1)
}

/// A simple cycle inside `members` with weight `> 0`.
pub(crate) fn positive_cycle(g: &Graph, members: &[bool]) -> Option<Vec<usize>> {
    negative_cycle(g, members, &|w| -(w as i128))
}

/// Potentials `p` with `p[v] >= p[u] + w(u, v)` on every arc inside
/// `members`; requires that no cycle there is positive.
pub(crate) fn longest_potentials(g: &Graph, members: &[bool]) -> Vec<i128> {
    let n = g.len();
    let mut dist = vec![0i128; n];
    let mut queued = members.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| members[v]).collect();
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        for a in &g.adj[u] {
            if members[a.to] {
                let nd = dist[u] - a.weight as i128;
                if nd < dist[a.to] {
                    dist[a.to] = nd;
                    if !queued[a.to] {
                        queued[a.to] = true;
                        queue.push_back(a.to);
                    }
                }
            }
        }
    }
    dist.into_iter().map(|d| -d).collect()
}

/// Closed walk from `start` inside `members` that passes through every member
/// and takes every arc accepted by `required`.
pub(crate) fn covering_tour(
    g: &Graph,
    members: &[bool],
    start: usize,
    required: &dyn Fn(usize, &Arc) -> bool,
    arc_ok: &dyn Fn(usize, &Arc) -> bool,
) -> Option<Vec<usize>> {
    let inside = |u: usize, a: &Arc| members[a.to] && arc_ok(u, a);
    let mut walk = vec![start];
    let mut visited = vec![false; g.len()];
    visited[start] = true;
    let goto = |walk: &mut Vec<usize>, visited: &mut Vec<bool>, target: usize| -> Option<()> {
        let here = *walk.last().expect("walk is never empty");
        let path = bfs_path(g, here, &|v| v == target, &inside)?;
        for &v in &path[1..] {
            visited[v] = true;
            walk.push(v);
        }
        Some(())
    };
    for u in (0..g.len()).filter(|&u| members[u]) {
        for a in g.adj[u].iter().filter(|a| inside(u, a) && required(u, a)) {
            goto(&mut walk, &mut visited, u)?;
            walk.push(a.to);
            visited[a.to] = true;
        }
    }
    for u in (0..g.len()).filter(|&u| members[u]) {
        if !visited[u] {
            goto(&mut walk, &mut visited, u)?;
        }
    }
    let here = *walk.last().expect("walk is never empty");
    if here != start || walk.len() == 1 {
        let path = bfs_path(g, here, &|v| v == start, &inside).filter(|p| p.len() > 1).or_else(|| {
            // Already at the start with an empty walk: leave and come back.
            let a = g.adj[here].iter().find(|a| inside(here, a))?;
            let mut back = bfs_path(g, a.to, &|v| v == start, &inside)?;
            back.insert(0, here);
            Some(back)
        })?;
        walk.extend_from_slice(&path[1..]);
    }
    walk.pop();
    Some(walk)
}
