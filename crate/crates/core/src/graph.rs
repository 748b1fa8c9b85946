//! Graph representations, contraction, and cut evaluation.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Anything that can enumerate its undirected edges with integer capacities.
pub trait CapacityGraph {
    fn vertex_count(&self) -> usize;

    /// Calls `f(u, v, cap)` once per undirected edge.
    fn for_each_edge<F: FnMut(usize, usize, u64)>(&self, f: F);

    fn to_cap_graph(&self) -> CapGraph {
        let mut edges = Vec::new();
        self.for_each_edge(|u, v, c| edges.push((u, v, c)));
        CapGraph::from_merged(self.vertex_count(), edges)
    }
}

/// An unweighted simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds a graph from vertex pairs. Self-loops, duplicate pairs (in either
    /// orientation) and out-of-range endpoints are rejected.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// `V_{>=d}`: vertices of degree at least `d`, ascending.
    pub fn high_degree(&self, d: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) >= d).collect()
    }

    /// Subgraph induced by `vertices` (relabelled densely in the given order)
    /// together with the local-to-original map.
    pub fn induced(&self, vertices: &[usize]) -> (SimpleGraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        let g =
            SimpleGraph::new(vertices.len(), edges).expect("induced subgraph of a simple graph");
        (g, vertices.to_vec())
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

impl CapacityGraph for SimpleGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn for_each_edge<F: FnMut(usize, usize, u64)>(&self, mut f: F) {
        for &(u, v) in &self.edges {
            f(u, v, 1);
        }
    }
}

/// Integer-capacitated undirected graph; parallel edges are merged by summing
/// capacities and self-loops are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapGraph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    adj: Vec<Vec<(usize, u64)>>,
}

impl CapGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        for &(u, v, _) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        Ok(Self::from_merged(n, edges))
    }

    fn from_merged(n: usize, edges: Vec<(usize, usize, u64)>) -> Self {
        let mut merged: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (u, v, c) in edges {
            if u == v || c == 0 {
                continue;
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0) += c;
        }
        let edges: Vec<_> = merged.into_iter().map(|((u, v), c)| (u, v, c)).collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v, c) in &edges {
            adj[u].push((v, c));
            adj[v].push((u, c));
        }
        Self { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of merged (distinct-pair) edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of capacities, i.e. the edge count of the multigraph this represents.
    pub fn total_capacity(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    pub fn weighted_degree(&self, v: usize) -> u64 {
        self.adj[v].iter().map(|&(_, c)| c).sum()
    }
}

impl CapacityGraph for CapGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn for_each_edge<F: FnMut(usize, usize, u64)>(&self, mut f: F) {
        for &(u, v, c) in &self.edges {
            f(u, v, c);
        }
    }

    fn to_cap_graph(&self) -> CapGraph {
        self.clone()
    }
}

/// A total map from original vertices to dense group ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexGrouping {
    group_of: Vec<usize>,
    groups: usize,
}

impl VertexGrouping {
    pub fn new(group_of: Vec<usize>) -> Result<Self> {
        let groups = group_of.iter().copied().max().map_or(0, |g| g + 1);
        let mut used = vec![false; groups];
        for &g in &group_of {
            used[g] = true;
        }
        if used.iter().any(|&u| !u) {
            return Err(Error::SparseGroupIds { groups });
        }
        Ok(Self { group_of, groups })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            group_of: (0..n).collect(),
            groups: n,
        }
    }

    /// Each listed set becomes one group (in order); every unlisted vertex
    /// becomes a singleton group after them. Sets must be disjoint.
    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut group_of = vec![usize::MAX; n];
        for (g, set) in sets.iter().enumerate() {
            for &v in set {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if group_of[v] != usize::MAX {
                    return Err(Error::BadVertexSets);
                }
                group_of[v] = g;
            }
        }
        let mut next = sets.len();
        for g in group_of.iter_mut().filter(|g| **g == usize::MAX) {
            *g = next;
            next += 1;
        }
        Self::new(group_of)
    }

    pub fn group_of(&self, v: usize) -> usize {
        self.group_of[v]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.group_of
    }

    pub fn group_count(&self) -> usize {
        self.groups
    }

    pub fn len(&self) -> usize {
        self.group_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group_of.is_empty()
    }

    /// Members of every group, each ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.groups];
        for (v, &g) in self.group_of.iter().enumerate() {
            out[g].push(v);
        }
        out
    }
}

/// Quotient graph: one vertex per group, inter-group capacities summed,
/// intra-group edges discarded.
pub fn contract<G: CapacityGraph>(g: &G, grouping: &VertexGrouping) -> Result<CapGraph> {
    if grouping.len() != g.vertex_count() {
        return Err(Error::GroupingNotTotal {
            got: grouping.len(),
            expected: g.vertex_count(),
        });
    }
    let mut edges = Vec::new();
    g.for_each_edge(|u, v, c| edges.push((grouping.group_of(u), grouping.group_of(v), c)));
    Ok(CapGraph::from_merged(grouping.group_count(), edges))
}

/// Membership mask for `side`; rejects out-of-range, empty and full sides.
pub(crate) fn side_mask(n: usize, side: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    let mut count = 0;
    for &v in side {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if !mask[v] {
            mask[v] = true;
            count += 1;
        }
    }
    if count == 0 || count == n {
        return Err(Error::ImproperSide);
    }
    Ok(mask)
}

/// Total capacity of edges with exactly one endpoint in `side`.
pub fn cut_value<G: CapacityGraph>(g: &G, side: &[usize]) -> Result<u64> {
    let mask = side_mask(g.vertex_count(), side)?;
    Ok(cut_value_masked(g, &mask))
}

pub(crate) fn cut_value_masked<G: CapacityGraph>(g: &G, mask: &[bool]) -> u64 {
    let mut total = 0;
    g.for_each_edge(|u, v, c| {
        if mask[u] != mask[v] {
            total += c;
        }
    });
    total
}

/// A cut given by its designated source side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// Source side, ascending.
    pub side: Vec<usize>,
    pub value: u64,
    /// Set when `side` is the canonical inclusion-minimal source side.
    pub source_minimal: bool,
}

impl Cut {
    pub fn contains(&self, v: usize) -> bool {
        self.side.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }
}
