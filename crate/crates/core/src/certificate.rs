//! Sparse k-connectivity certificates from a forest decomposition.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::unionfind::UnionFind;

/// Union of `k` successive maximal spanning forests. Every cut of the result
/// has value at least `min(original, k)` and at most the original value.
pub fn sparsify(g: &SimpleGraph, k: usize) -> Result<SimpleGraph> {
    if k == 0 {
        return Err(Error::InvalidConnectivity);
    }
    let mut remaining: Vec<(usize, usize)> = g.edges().to_vec();
    let mut kept = Vec::new();
    for _ in 0..k {
        if remaining.is_empty() {
            break;
        }
        let mut uf = UnionFind::new(g.n());
        let mut rest = Vec::with_capacity(remaining.len());
        for (u, v) in remaining {
            if uf.union(u, v) {
                kept.push((u, v));
            } else {
                rest.push((u, v));
            }
        }
        remaining = rest;
    }
    SimpleGraph::new(g.n(), kept)
}
