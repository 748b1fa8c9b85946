//! Exact integral s-t max-flow (Dinic) with canonical minimal mincut sides.
//!
//! Every flow computation on the current thread bumps a counter readable via
//! [`flow_calls`], which the higher layers use for call accounting.

use crate::error::{Error, Result};
use crate::graph::{contract, CapGraph, Cut, VertexGrouping};
use std::cell::Cell;
use std::collections::VecDeque;

thread_local! {
    static FLOW_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of max-flow computations performed on this thread so far.
pub fn flow_calls() -> u64 {
    FLOW_CALLS.with(Cell::get)
}

fn count_call() {
    FLOW_CALLS.with(|c| c.set(c.get() + 1));
}

/// Residual network for an undirected capacitated graph. Each undirected edge
/// becomes a pair of opposite arcs that are each other's reverse.
struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

impl Network {
    fn new(g: &CapGraph) -> Self {
        let mut adj = vec![Vec::new(); g.n()];
        let mut to = Vec::with_capacity(2 * g.edge_count());
        let mut cap = Vec::with_capacity(2 * g.edge_count());
        for &(u, v, c) in g.edges() {
            adj[u].push(to.len());
            to.push(v);
            cap.push(c);
            adj[v].push(to.len());
            to.push(u);
            cap.push(c);
        }
        Self {
            level: vec![0; g.n()],
            iter: vec![0; g.n()],
            adj,
            to,
            cap,
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && self.level[v] == u32::MAX {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, limit: u64) -> u64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let a = self.adj[u][self.iter[u]];
            let v = self.to[a];
            if self.cap[a] > 0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.cap[a]));
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        count_call();
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Vertices reachable from `s` through arcs with residual capacity.
    fn residual_side(&self, s: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }
}

fn check_pair(g: &CapGraph, s: usize, t: usize) -> Result<()> {
    for v in [s, t] {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
    }
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    Ok(())
}

/// Exact maximum flow value between `s` and `t`.
pub fn max_flow_value(g: &CapGraph, s: usize, t: usize) -> Result<u64> {
    check_pair(g, s, t)?;
    Ok(Network::new(g).max_flow(s, t))
}

/// The unique inclusion-minimal source side among all minimum `(s, t)`-cuts:
/// the residual-reachable set of `s` after any maximum flow.
pub fn st_mincut_minimal(g: &CapGraph, s: usize, t: usize) -> Result<Cut> {
    check_pair(g, s, t)?;
    let mut net = Network::new(g);
    let value = net.max_flow(s, t);
    Ok(Cut {
        side: net.residual_side(s),
        value,
        source_minimal: true,
    })
}

/// Minimum cut separating vertex set `a` (source side) from `b`, computed by
/// contracting each set to a single terminal. The returned side is the
/// minimal one containing `a`, expanded to original vertices.
pub fn set_mincut(g: &CapGraph, a: &[usize], b: &[usize]) -> Result<Cut> {
    let n = g.n();
    if a.is_empty() || b.is_empty() {
        return Err(Error::BadVertexSets);
    }
    let mut group = vec![usize::MAX; n];
    for (label, set) in [(0, a), (1, b)] {
        for &v in set {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if group[v] != usize::MAX && group[v] != label {
                return Err(Error::BadVertexSets);
            }
            group[v] = label;
        }
    }
    let mut next = 2;
    for g in group.iter_mut().filter(|g| **g == usize::MAX) {
        *g = next;
        next += 1;
    }
    let grouping = VertexGrouping::new(group)?;
    let quotient = contract(g, &grouping)?;
    let cut = st_mincut_minimal(&quotient, 0, 1)?;
    let mut in_side = vec![false; quotient.n()];
    for &q in &cut.side {
        in_side[q] = true;
    }
    Ok(Cut {
        side: (0..n).filter(|&v| in_side[grouping.group_of(v)]).collect(),
        value: cut.value,
        source_minimal: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{barbell, complete, cycle, path, star};
    use crate::graph::CapacityGraph;

    #[test]
    fn flow_values() {
        assert_eq!(max_flow_value(&path(3).to_cap_graph(), 0, 2).unwrap(), 1);
        assert_eq!(
            max_flow_value(&complete(4).to_cap_graph(), 0, 1).unwrap(),
            3
        );
        assert_eq!(max_flow_value(&barbell(3).to_cap_graph(), 0, 5).unwrap(), 1);
        assert_eq!(
            max_flow_value(&path(3).to_cap_graph(), 1, 1),
            Err(Error::SameEndpoints(1))
        );
    }

    #[test]
    fn minimal_sides() {
        let cut = st_mincut_minimal(&path(3).to_cap_graph(), 0, 2).unwrap();
        assert_eq!((cut.side, cut.value), (vec![0], 1));
        let cut = st_mincut_minimal(&complete(4).to_cap_graph(), 0, 1).unwrap();
        assert_eq!((cut.side, cut.value), (vec![0], 3));
        let cut = st_mincut_minimal(&star(3).to_cap_graph(), 1, 2).unwrap();
        assert_eq!((cut.side, cut.value), (vec![1], 1));
        let cut = st_mincut_minimal(&barbell(3).to_cap_graph(), 0, 5).unwrap();
        assert_eq!((cut.side, cut.value), (vec![0, 1, 2], 1));
    }

    #[test]
    fn set_cuts() {
        assert_eq!(
            set_mincut(&path(3).to_cap_graph(), &[0], &[2])
                .unwrap()
                .value,
            1
        );
        let c4 = cycle(4).to_cap_graph();
        assert_eq!(set_mincut(&c4, &[0], &[1, 3]).unwrap().value, 2);
        let k4 = complete(4).to_cap_graph();
        let cut = set_mincut(&k4, &[0, 1], &[2, 3]).unwrap();
        assert_eq!((cut.side, cut.value), (vec![0, 1], 4));
        assert_eq!(set_mincut(&k4, &[0, 1], &[1]), Err(Error::BadVertexSets));
        assert_eq!(set_mincut(&k4, &[], &[1]), Err(Error::BadVertexSets));
    }

    #[test]
    fn counts_calls() {
        let before = flow_calls();
        let g = path(4).to_cap_graph();
        max_flow_value(&g, 0, 3).unwrap();
        st_mincut_minimal(&g, 0, 3).unwrap();
        assert_eq!(flow_calls() - before, 2);
    }
}
