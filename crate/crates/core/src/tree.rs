//! Weighted trees on the full vertex set and path-minimum queries.

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// A spanning tree on `0..n` whose path minima are meant to equal pairwise
/// mincut values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhTree {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    adj: Vec<Vec<(usize, u64)>>,
}

impl GhTree {
    /// Validates that `edges` form a spanning tree of `0..n`. Edges are
    /// normalised to `u < v` and sorted.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Result<Self> {
        let mut edges: Vec<_> = edges
            .into_iter()
            .map(|(u, v, w)| (u.min(v), u.max(v), w))
            .collect();
        edges.sort_unstable();
        if edges.len() != n.saturating_sub(1) {
            return Err(Error::MalformedTree(format!(
                "{} edges for {n} vertices",
                edges.len()
            )));
        }
        let mut uf = UnionFind::new(n);
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if !uf.union(u, v) {
                return Err(Error::MalformedTree(format!(
                    "edge ({u}, {v}) closes a cycle"
                )));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        Ok(Self { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v, weight)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// Minimum edge weight on the path between `u` and `v`.
    pub fn query_mincut(&self, u: usize, v: usize) -> Result<u64> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SameQueryVertex(u));
        }
        Ok(path_minima(&self.adj, u)[v].expect("spanning tree is connected"))
    }

    /// `m[u][v]` is the path minimum between `u` and `v` (`u64::MAX` on the
    /// diagonal).
    pub fn all_pairs(&self) -> Vec<Vec<u64>> {
        (0..self.n)
            .map(|u| {
                path_minima(&self.adj, u)
                    .into_iter()
                    .map(|m| m.unwrap_or(u64::MAX))
                    .collect()
            })
            .collect()
    }
}

/// Path minimum from `src` to every vertex reachable in the forest `adj`;
/// `Some(u64::MAX)` for `src` itself, `None` when unreachable.
pub(crate) fn path_minima(adj: &[Vec<(usize, u64)>], src: usize) -> Vec<Option<u64>> {
    let mut best = vec![None; adj.len()];
    best[src] = Some(u64::MAX);
    let mut stack = vec![src];
    while let Some(u) = stack.pop() {
        let here = best[u].expect("visited");
        for &(v, w) in &adj[u] {
            if best[v].is_none() {
                best[v] = Some(here.min(w));
                stack.push(v);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_queries() {
        let t = GhTree::new(3, [(1, 0, 1), (1, 2, 1)]).unwrap();
        assert_eq!(t.edges(), &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(t.query_mincut(0, 2), Ok(1));
        assert_eq!(t.query_mincut(0, 0), Err(Error::SameQueryVertex(0)));
        assert!(t.query_mincut(0, 3).is_err());
    }

    #[test]
    fn star_queries() {
        let t = GhTree::new(4, [(0, 1, 3), (0, 2, 3), (0, 3, 3)]).unwrap();
        let all = t.all_pairs();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(all[u][v], 3);
                }
            }
        }
    }

    #[test]
    fn bridge_is_the_bottleneck() {
        let t = GhTree::new(6, [(0, 1, 2), (1, 2, 2), (2, 3, 1), (3, 4, 2), (4, 5, 2)]).unwrap();
        assert_eq!(t.query_mincut(0, 5), Ok(1));
        assert_eq!(t.query_mincut(3, 5), Ok(2));
    }

    #[test]
    fn rejects_non_trees() {
        assert!(GhTree::new(3, [(0, 1, 1)]).is_err());
        assert!(GhTree::new(3, [(0, 1, 1), (1, 0, 1)]).is_err());
        assert!(GhTree::new(1, []).is_ok());
        assert!(GhTree::new(0, []).is_ok());
    }
}
