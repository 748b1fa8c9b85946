//! Isolating cuts: for a terminal set `T`, the `t`-minimal `(t, T \ {t})`
//! mincut of every terminal, using `ceil(log2 |T|)` bipartition flows plus at
//! most one cleanup flow per terminal.

use crate::error::{Error, Result};
use crate::graph::{CapGraph, Cut};
use crate::maxflow::{self, flow_calls};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingCutsResult {
    /// `(terminal, cut)` pairs in ascending terminal order.
    pub cuts: Vec<(usize, Cut)>,
    pub maxflow_call_count: u64,
}

impl IsolatingCutsResult {
    pub fn get(&self, t: usize) -> Option<&Cut> {
        self.cuts
            .binary_search_by_key(&t, |(v, _)| *v)
            .ok()
            .map(|i| &self.cuts[i].1)
    }
}

/// Upper bound on the flows [`isolating_cuts`] may use for `t` terminals.
pub fn call_budget(t: usize) -> u64 {
    ceil_log2(t) as u64 + t as u64
}

pub(crate) fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

pub fn isolating_cuts(g: &CapGraph, terminals: &[usize]) -> Result<IsolatingCutsResult> {
    let n = g.n();
    let mut terms = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    if let Some(&v) = terms.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if terms.len() < 2 {
        return Err(Error::TooFewTerminals(terms.len()));
    }
    let start = flow_calls();

    // key[v] accumulates, bit by bit, which side of each bipartition v is on;
    // a terminal's key ends up equal to its label (its index in `terms`).
    let mut key = vec![0usize; n];
    for bit in 0..ceil_log2(terms.len()) {
        let (ones, zeros): (Vec<usize>, Vec<usize>) =
            (0..terms.len()).partition(|&label| label >> bit & 1 == 1);
        if ones.is_empty() || zeros.is_empty() {
            continue;
        }
        let zeros: Vec<usize> = zeros.into_iter().map(|l| terms[l]).collect();
        let ones: Vec<usize> = ones.into_iter().map(|l| terms[l]).collect();
        let cut = maxflow::set_mincut(g, &zeros, &ones)?;
        let mut on_zero_side = vec![false; n];
        for &v in &cut.side {
            on_zero_side[v] = true;
        }
        for v in 0..n {
            if !on_zero_side[v] {
                key[v] |= 1 << bit;
            }
        }
    }

    // region[v] = label of the terminal whose region contains v, if any
    let region: Vec<Option<usize>> = key
        .iter()
        .map(|&k| (k < terms.len()).then_some(k))
        .collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); terms.len()];
    for v in 0..n {
        if let Some(r) = region[v] {
            members[r].push(v);
        }
    }
    // Edges of each region's contracted graph; the sink of region r is the
    // vertex after its members.
    let mut local = vec![0usize; n];
    for set in &members {
        for (i, &v) in set.iter().enumerate() {
            local[v] = i;
        }
    }
    let mut region_edges: Vec<Vec<(usize, usize, u64)>> = vec![Vec::new(); terms.len()];
    for &(u, v, c) in g.edges() {
        match (region[u], region[v]) {
            (Some(a), Some(b)) if a == b => region_edges[a].push((local[u], local[v], c)),
            (ru, rv) => {
                if let Some(a) = ru {
                    region_edges[a].push((local[u], members[a].len(), c));
                }
                if let Some(b) = rv {
                    region_edges[b].push((local[v], members[b].len(), c));
                }
            }
        }
    }

    let mut cuts = Vec::with_capacity(terms.len());
    for (label, &t) in terms.iter().enumerate() {
        let set = &members[label];
        let cut = if set.len() == 1 {
            Cut {
                side: vec![t],
                value: g.weighted_degree(t),
                source_minimal: true,
            }
        } else {
            let edges = std::mem::take(&mut region_edges[label]);
            let sub = CapGraph::new(set.len() + 1, edges)?;
            let c = maxflow::st_mincut_minimal(&sub, local[t], set.len())?;
            let mut side: Vec<usize> = c.side.iter().map(|&i| set[i]).collect();
            side.sort_unstable();
            Cut {
                side,
                value: c.value,
                source_minimal: true,
            }
        };
        cuts.push((t, cut));
    }
    Ok(IsolatingCutsResult {
        cuts,
        maxflow_call_count: flow_calls() - start,
    })
}
