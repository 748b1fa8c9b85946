//! Refining a partial tree with a well-linked set: one auxiliary graph per
//! affected part, a partial tree inside each driven by capped single-source
//! mincut values, and a splice of the fragments back into the tree.

use crate::error::{Error, Result};
use crate::graph::{contract, CapGraph, SimpleGraph, VertexGrouping};
use crate::maxflow::flow_calls;
use crate::partial_tree::{
    partial_tree, split_part, PartialTree, PartialTreeConfig, PartialTreeStats, SplitOutcome,
    SscOracle, SscQuery,
};
use crate::rng;
use crate::sstmincut::{single_source_mincut, SamplerConfig, SscStats, ValTable};
use crate::wellinked::WellLinkedCluster;
use std::collections::BTreeMap;

/// `H` with every component of `T - u_i` contracted to one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    /// The part's terminal `u_i` (original id).
    pub part: usize,
    pub h: CapGraph,
    /// Local id of `u_i`.
    pub terminal: usize,
    /// Local ids of `X_i`.
    pub x: Vec<usize>,
    /// Local vertex -> original vertices it stands for. The first
    /// `part_size` locals are the part's own vertices, in ascending order.
    pub back_map: Vec<Vec<usize>>,
    pub part_size: usize,
    /// `(local contracted vertex, tree neighbour of u_i in that component)`.
    pub neighbours: Vec<(usize, usize)>,
    pub n_i: usize,
    /// Edge count of the multigraph `H_i` (parallel edges counted).
    pub m_i: u64,
}

/// Size of every auxiliary graph the tree would induce, and the ceilings
/// they are held to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuxBudget {
    pub n: usize,
    pub d: usize,
    pub sum_n: usize,
    pub sum_m: u64,
    pub m_h: usize,
    pub m_g: usize,
    pub tree_weight: u64,
}

impl AuxBudget {
    pub fn vertices_ok(&self) -> bool {
        self.sum_n <= 3 * self.n
    }

    pub fn edges_ok(&self) -> bool {
        self.sum_m <= (3 * self.m_h as u64).min(5 * (self.n * self.d) as u64)
    }

    pub fn weight_ok(&self) -> bool {
        self.tree_weight <= (2 * self.m_g as u64).min(2 * (self.n * self.d) as u64)
    }

    pub fn ok(&self) -> bool {
        self.vertices_ok() && self.edges_ok() && self.weight_ok()
    }
}

fn check_universe(h: &SimpleGraph, pt: &PartialTree) -> Result<()> {
    if pt.n() != h.n() {
        return Err(Error::GroupingNotTotal {
            got: pt.n(),
            expected: h.n(),
        });
    }
    Ok(())
}

/// Totals over every terminal: `sum n'_i = n + 2(|V(T)| - 1)` and each edge
/// of `H` appears in one auxiliary graph per terminal on its tree path.
pub fn auxiliary_budget(
    h: &SimpleGraph,
    pt: &PartialTree,
    d: usize,
    m_g: usize,
) -> Result<AuxBudget> {
    check_universe(h, pt)?;
    let n = h.n();
    let adj = pt.adjacency();
    let mut dist_cache: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut sum_m = 0u64;
    for &(x, y) in h.edges() {
        let (a, b) = (pt.terminal_of(x), pt.terminal_of(y));
        let dist = dist_cache
            .entry(a)
            .or_insert_with(|| hop_distances(&adj, a));
        sum_m += 1 + dist[b];
    }
    Ok(AuxBudget {
        n,
        d,
        sum_n: n + 2 * pt.edges().len(),
        sum_m,
        m_h: h.m(),
        m_g,
        tree_weight: pt.edges().iter().map(|e| e.2).sum(),
    })
}

fn hop_distances(adj: &[Vec<(usize, u64)>], src: usize) -> Vec<u64> {
    let mut dist = vec![u64::MAX; adj.len()];
    dist[src] = 0;
    let mut stack = vec![src];
    while let Some(u) = stack.pop() {
        for &(v, _) in &adj[u] {
            if dist[v] == u64::MAX {
                dist[v] = dist[u] + 1;
                stack.push(v);
            }
        }
    }
    dist
}

/// The auxiliary graph of the part whose terminal is `u_i`, with `x` (any
/// vertex set) restricted to that part.
pub fn auxiliary_graph(
    h: &SimpleGraph,
    pt: &PartialTree,
    u_i: usize,
    x: &[usize],
) -> Result<AuxiliaryGraph> {
    check_universe(h, pt)?;
    if u_i >= pt.n() || !pt.is_terminal(u_i) {
        return Err(Error::MalformedTree(format!("{u_i} is not a terminal")));
    }
    let adj = pt.adjacency();
    let part = pt.part(u_i);
    let mut comp = vec![usize::MAX; pt.n()];
    let mut neighbours = Vec::with_capacity(adj[u_i].len());
    for (j, &(c, _)) in adj[u_i].iter().enumerate() {
        neighbours.push((part.len() + j, c));
        comp[c] = j;
        let mut stack = vec![c];
        while let Some(a) = stack.pop() {
            for &(b, _) in &adj[a] {
                if b != u_i && comp[b] == usize::MAX {
                    comp[b] = j;
                    stack.push(b);
                }
            }
        }
    }
    let mut local = vec![usize::MAX; pt.n()];
    for (i, &v) in part.iter().enumerate() {
        local[v] = i;
    }
    let group: Vec<usize> = (0..pt.n())
        .map(|v| {
            let t = pt.terminal_of(v);
            if t == u_i {
                local[v]
            } else {
                part.len() + comp[t]
            }
        })
        .collect();
    let grouping = VertexGrouping::new(group)?;
    let hi = contract(h, &grouping)?;
    let back_map = grouping.members();
    let mut xs: Vec<usize> = x
        .iter()
        .filter(|&&v| v < pt.n() && pt.terminal_of(v) == u_i)
        .map(|&v| local[v])
        .collect();
    xs.sort_unstable();
    xs.dedup();
    Ok(AuxiliaryGraph {
        part: u_i,
        terminal: local[u_i],
        x: xs,
        part_size: part.len(),
        neighbours,
        n_i: hi.n(),
        m_i: hi.total_capacity(),
        h: hi,
        back_map,
    })
}

/// Auxiliary graphs for the parts that meet `x`, in terminal order.
pub fn build_auxiliary_graphs(
    h: &SimpleGraph,
    pt: &PartialTree,
    x: &[usize],
) -> Result<Vec<AuxiliaryGraph>> {
    check_universe(h, pt)?;
    let mut hit = vec![false; pt.n()];
    for &v in x {
        if v >= pt.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: pt.n(),
            });
        }
        hit[pt.terminal_of(v)] = true;
    }
    pt.terminals()
        .iter()
        .filter(|&&t| hit[t])
        .map(|&t| auxiliary_graph(h, pt, t, x))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineConfig {
    pub seed: u64,
    /// The constant `c` in `ceil(c ln n / phi)` sampling rounds.
    pub rounds_constant: f64,
    /// Vertex count used for the round count (the whole input's `n`).
    pub n: usize,
    pub retry_cap: usize,
    pub confirm: bool,
}

/// Answers verification queries from capped single-source values of the
/// auxiliary graph, computed once per source.
struct ValOracle<'a> {
    h: &'a CapGraph,
    x: &'a [usize],
    d: u64,
    phi: f64,
    cfg: &'a RefineConfig,
    seed: u64,
    tables: BTreeMap<usize, ValTable>,
    invocations: Vec<SscStats>,
}

impl SscOracle for ValOracle<'_> {
    fn verify(&mut self, q: &SscQuery<'_>) -> Result<Vec<bool>> {
        let lift = |v: usize| {
            q.origin[v].ok_or_else(|| {
                Error::RefinementIntegrity(format!("query vertex {v} is contracted"))
            })
        };
        let s = lift(q.source)?;
        if !self.tables.contains_key(&s) {
            let sampler = SamplerConfig::new(
                self.phi,
                self.cfg.n,
                self.cfg.rounds_constant,
                rng::derive_seed(self.seed, &[s as u64]),
            )?;
            let table = single_source_mincut(self.h, self.x, self.d, self.phi, s, &sampler)?;
            self.invocations.push(table.stats.clone());
            self.tables.insert(s, table);
        }
        let table = &self.tables[&s];
        q.claims
            .iter()
            .map(|&(v, claim)| Ok(table.get(lift(v)?) == Some(claim)))
            .collect()
    }

    fn observe(&mut self, source: usize, v: usize, value: u64) {
        if let Some(t) = self.tables.get_mut(&source) {
            t.set(v, value);
        }
    }
}

/// A refined partial tree of one auxiliary graph, in its local ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    pub tree: PartialTree,
    pub partial: PartialTreeStats,
    pub ssc: Vec<SscStats>,
    pub rounds: usize,
    pub flows: u64,
    /// Whether `u_i` was split off by a cut rather than made terminal.
    pub split: bool,
}

/// Partial tree of `aux.h` capturing mincuts of value at most `2d` among
/// `X_i`, then extended so that `u_i` is a terminal.
pub fn refine_part(
    aux: &AuxiliaryGraph,
    d: usize,
    phi: f64,
    cfg: &RefineConfig,
) -> Result<Fragment> {
    let start = flow_calls();
    let k = 2 * d as u64;
    let seed = rng::derive_seed(cfg.seed, &[aux.part as u64]);
    let rounds = SamplerConfig::new(phi, cfg.n, cfg.rounds_constant, 0)?.rounds;
    let (mut tree, partial, ssc) = if aux.x.is_empty() {
        (
            PartialTree::trivial(aux.n_i, aux.terminal),
            PartialTreeStats::default(),
            Vec::new(),
        )
    } else {
        let mut oracle = ValOracle {
            h: &aux.h,
            x: &aux.x,
            d: d as u64,
            phi,
            cfg,
            seed,
            tables: BTreeMap::new(),
            invocations: Vec::new(),
        };
        let pt_cfg = PartialTreeConfig {
            seed: rng::derive_seed(seed, &[u64::MAX]),
            retry_cap: cfg.retry_cap,
            confirm: cfg.confirm,
        };
        let run = partial_tree(&aux.h, &aux.x, k, &mut oracle, &pt_cfg)?;
        (run.tree, run.stats, oracle.invocations)
    };
    let u = aux.terminal;
    let x = tree.terminal_of(u);
    let mut split = false;
    if x != u {
        match split_part(&aux.h, &mut tree, x, u, Some(k))? {
            SplitOutcome::Split(_) => split = true,
            SplitOutcome::Exceeded(_) => tree.replace_terminal(x, u),
        }
    }
    Ok(Fragment {
        tree,
        partial,
        ssc,
        rounds,
        flows: flow_calls() - start,
        split,
    })
}

/// What one [`refine`] call did.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineReport {
    pub budget: AuxBudget,
    pub parts: usize,
    pub rounds: usize,
    pub ssc: Vec<SscStats>,
    pub depths: Vec<usize>,
    pub retries: usize,
    pub fallbacks: usize,
    pub rejected: usize,
    pub flows: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineOutput {
    pub tree: PartialTree,
    pub report: RefineReport,
}

/// Refines `pt` (which captures mincuts up to `d` and none above `2d`) with
/// the well-linked cluster `x` of the `3d`-certificate `h` of `g`.
pub fn refine(
    g: &SimpleGraph,
    h: &SimpleGraph,
    pt: &PartialTree,
    x: &WellLinkedCluster,
    d: usize,
    cfg: &RefineConfig,
) -> Result<RefineOutput> {
    if g.n() != h.n() {
        return Err(Error::GroupingNotTotal {
            got: h.n(),
            expected: g.n(),
        });
    }
    let start = flow_calls();
    let budget = auxiliary_budget(h, pt, d, g.m())?;
    if !budget.ok() {
        return Err(Error::AuxiliaryBudget(format!("{budget:?}")));
    }
    let auxes = build_auxiliary_graphs(h, pt, &x.members)?;
    let mut report = RefineReport {
        budget,
        parts: auxes.len(),
        rounds: SamplerConfig::new(x.phi, cfg.n, cfg.rounds_constant, 0)?.rounds,
        ssc: Vec::new(),
        depths: Vec::new(),
        retries: 0,
        fallbacks: 0,
        rejected: 0,
        flows: 0,
    };

    let mut part_of = pt.part_of().to_vec();
    let mut edges = Vec::new();
    // (part terminal, tree neighbour) -> new endpoint on the part's side
    let mut endpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for aux in &auxes {
        let frag = refine_part(aux, d, x.phi, cfg)?;
        report.ssc.extend(frag.ssc.iter().cloned());
        report.depths.push(frag.partial.max_depth);
        report.retries += frag.partial.retries;
        report.fallbacks += frag.partial.fallbacks;
        report.rejected += frag.partial.rejected;
        let orig = |l: usize| -> Result<usize> {
            if l < aux.part_size {
                Ok(aux.back_map[l][0])
            } else {
                Err(Error::RefinementIntegrity(format!(
                    "fragment terminal {l} is a contracted vertex"
                )))
            }
        };
        let t = &frag.tree;
        for l in 0..aux.part_size {
            part_of[aux.back_map[l][0]] = orig(t.terminal_of(l))?;
        }
        for &(a, b, w) in t.edges() {
            edges.push((orig(a)?, orig(b)?, w));
        }
        for &(l, c) in &aux.neighbours {
            endpoint.insert((aux.part, c), orig(t.terminal_of(l))?);
        }
    }
    for &(a, b, w) in pt.edges() {
        let ea = endpoint.get(&(a, b)).copied().unwrap_or(a);
        let eb = endpoint.get(&(b, a)).copied().unwrap_or(b);
        edges.push((ea, eb, w));
    }
    let tree = PartialTree::new(part_of, edges)
        .map_err(|e| Error::RefinementIntegrity(format!("spliced tree invalid: {e}")))?;
    if !tree.is_refinement_of(pt) {
        return Err(Error::RefinementIntegrity(
            "result does not refine the input".into(),
        ));
    }
    let ceiling = 2 * d as u64;
    if let Some(e) = tree.edges().iter().find(|e| e.2 > ceiling) {
        return Err(Error::RefinementIntegrity(format!(
            "edge {e:?} exceeds 2d = {ceiling}"
        )));
    }
    report.flows = flow_calls() - start;
    Ok(RefineOutput { tree, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{barbell, complete, path};
    use crate::graph::CapacityGraph;

    fn cfg(n: usize) -> RefineConfig {
        RefineConfig {
            seed: 11,
            rounds_constant: 4.0,
            n,
            retry_cap: 20,
            confirm: true,
        }
    }

    #[test]
    fn single_terminal_aux_is_h() {
        let k4 = complete(4);
        let pt = PartialTree::trivial(4, 0);
        let aux = build_auxiliary_graphs(&k4, &pt, &[0, 1, 2, 3]).unwrap();
        assert_eq!(aux.len(), 1);
        assert_eq!(aux[0].h, k4.to_cap_graph());
        assert_eq!(aux[0].x, vec![0, 1, 2, 3]);
    }

    #[test]
    fn barbell_aux() {
        let b = barbell(3);
        let pt = PartialTree::new(vec![0, 0, 0, 3, 3, 3], vec![(0, 3, 1)]).unwrap();
        let aux = auxiliary_graph(&b, &pt, 0, &[]).unwrap();
        assert_eq!((aux.n_i, aux.m_i), (4, 4));
        assert_eq!(aux.neighbours, vec![(3, 3)]);
        assert_eq!(aux.back_map[3], vec![3, 4, 5]);
        let budget = auxiliary_budget(&b, &pt, 1, b.m()).unwrap();
        assert_eq!(budget.sum_n, 8);
        assert_eq!(budget.sum_m, 8);
    }

    #[test]
    fn path_middle_aux() {
        let p = path(4);
        let pt = PartialTree::new(vec![0, 1, 1, 3], vec![(0, 1, 1), (1, 3, 1)]).unwrap();
        let aux = auxiliary_graph(&p, &pt, 1, &[]).unwrap();
        assert_eq!(aux.n_i, 4);
        assert_eq!(aux.back_map[2], vec![0]);
        assert_eq!(aux.back_map[3], vec![3]);
    }

    #[test]
    fn fragment_examples() {
        let b = barbell(3);
        let pt = PartialTree::new(vec![0, 0, 0, 3, 3, 3], vec![(0, 3, 1)]).unwrap();
        let aux = auxiliary_graph(&b, &pt, 0, &[0, 1, 2]).unwrap();
        let frag = refine_part(&aux, 2, 0.5, &cfg(6)).unwrap();
        assert_eq!(frag.tree.terminals(), &[0, 1, 2]);
        assert!(frag.tree.edges().iter().all(|e| e.2 == 2));

        let k4 = complete(4);
        let aux = auxiliary_graph(&k4, &PartialTree::trivial(4, 0), 0, &[0, 1, 2, 3]).unwrap();
        let frag = refine_part(&aux, 3, 1.0, &cfg(4)).unwrap();
        assert_eq!(frag.tree.terminals().len(), 4);
        assert!(frag.tree.edges().iter().all(|e| e.2 == 3));

        let aux = auxiliary_graph(&k4, &PartialTree::trivial(4, 0), 0, &[0]).unwrap();
        let frag = refine_part(&aux, 3, 1.0, &cfg(4)).unwrap();
        assert_eq!(frag.tree, PartialTree::trivial(4, 0));
    }
}
