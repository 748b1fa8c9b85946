//! Exhaustive subset-enumeration oracles for small graphs. These never touch
//! the flow code and exist so every flow-based routine can be cross-checked.

use crate::graph::CapacityGraph;

/// Largest vertex count the enumerators accept.
pub const MAX_VERTICES: usize = 24;

fn edges<G: CapacityGraph>(g: &G) -> Vec<(usize, usize, u64)> {
    assert!(
        g.vertex_count() <= MAX_VERTICES,
        "exhaustive enumeration limited to {MAX_VERTICES} vertices"
    );
    let mut out = Vec::new();
    g.for_each_edge(|u, v, c| out.push((u, v, c)));
    out
}

fn mask_cut(edges: &[(usize, usize, u64)], mask: u32) -> u64 {
    edges
        .iter()
        .filter(|&&(u, v, _)| (mask >> u & 1) != (mask >> v & 1))
        .map(|e| e.2)
        .sum()
}

fn set_mask(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

/// All `(side mask, cut value)` pairs for sides containing `a` and avoiding `b`.
fn feasible<G: CapacityGraph>(g: &G, a: &[usize], b: &[usize]) -> Vec<(u32, u64)> {
    let es = edges(g);
    let n = g.vertex_count();
    let (am, bm) = (set_mask(a), set_mask(b));
    (0..1u32 << n)
        .filter(|&m| m & am == am && m & bm == 0)
        .map(|m| (m, mask_cut(&es, m)))
        .collect()
}

/// Minimum cut value separating vertex set `a` from vertex set `b`.
pub fn set_mincut<G: CapacityGraph>(g: &G, a: &[usize], b: &[usize]) -> u64 {
    feasible(g, a, b)
        .into_iter()
        .map(|(_, c)| c)
        .min()
        .expect("disjoint nonempty sets")
}

pub fn mincut<G: CapacityGraph>(g: &G, s: usize, t: usize) -> u64 {
    set_mincut(g, &[s], &[t])
}

/// Intersection of every minimum-cut side containing `a` and avoiding `b`.
pub fn minimal_side<G: CapacityGraph>(g: &G, a: &[usize], b: &[usize]) -> (Vec<usize>, u64) {
    let all = feasible(g, a, b);
    let best = all
        .iter()
        .map(|&(_, c)| c)
        .min()
        .expect("disjoint nonempty sets");
    let mask = all
        .iter()
        .filter(|&&(_, c)| c == best)
        .fold(u32::MAX, |acc, &(m, _)| acc & m);
    let side = (0..g.vertex_count())
        .filter(|&v| mask >> v & 1 == 1)
        .collect();
    (side, best)
}

/// Every minimum-cut side containing `a` and avoiding `b`.
pub fn all_min_sides<G: CapacityGraph>(g: &G, a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    let all = feasible(g, a, b);
    let best = all
        .iter()
        .map(|&(_, c)| c)
        .min()
        .expect("disjoint nonempty sets");
    all.into_iter()
        .filter(|&(_, c)| c == best)
        .map(|(m, _)| (0..g.vertex_count()).filter(|&v| m >> v & 1 == 1).collect())
        .collect()
}

/// Pairwise mincut matrix from a single pass over all sides.
pub fn all_pairs<G: CapacityGraph>(g: &G) -> Vec<Vec<u64>> {
    let es = edges(g);
    let n = g.vertex_count();
    let mut best = vec![vec![u64::MAX; n]; n];
    if n < 2 {
        return best;
    }
    // vertex n-1 fixed outside; each side is visited once
    for m in 1..1u32 << (n - 1) {
        let c = mask_cut(&es, m);
        for u in (0..n).filter(|&u| m >> u & 1 == 1) {
            for v in (0..n).filter(|&v| m >> v & 1 == 0) {
                if c < best[u][v] {
                    best[u][v] = c;
                    best[v][u] = c;
                }
            }
        }
    }
    best
}

/// Cut value of every proper side, keyed by mask (vertex `n-1` outside).
pub fn all_cuts<G: CapacityGraph>(g: &G) -> Vec<(Vec<usize>, u64)> {
    let es = edges(g);
    let n = g.vertex_count();
    if n < 2 {
        return Vec::new();
    }
    (1..1u32 << (n - 1))
        .map(|m| {
            let side = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            (side, mask_cut(&es, m))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{barbell, complete, path};

    #[test]
    fn small_values() {
        assert_eq!(mincut(&complete(4), 0, 1), 3);
        assert_eq!(mincut(&barbell(3), 0, 5), 1);
        let (side, v) = minimal_side(&path(3), &[0], &[2]);
        assert_eq!((side, v), (vec![0], 1));
        assert_eq!(all_min_sides(&path(3), &[0], &[2]).len(), 2);
        let ap = all_pairs(&barbell(3));
        assert_eq!(ap[0][1], 2);
        assert_eq!(ap[1][4], 1);
        assert_eq!(all_cuts(&complete(4)).len(), 7);
    }
}
