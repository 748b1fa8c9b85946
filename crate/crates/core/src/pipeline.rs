//! End-to-end tree construction: the fast doubling pipeline, the classical
//! `n - 1` max-flow baseline, and the all-pairs verifier.

use crate::certificate::sparsify;
use crate::error::{Error, Result};
use crate::graph::{CapacityGraph, SimpleGraph};
use crate::isolating::ceil_log2;
use crate::maxflow::{self, flow_calls};
use crate::partial_tree::{
    partial_tree, split_part, BruteForceOracle, PartialTree, PartialTreeConfig, PartialTreeRun,
    PartialTreeStats,
};
use crate::refine::{refine, AuxBudget, RefineConfig};
use crate::rng;
use crate::tree::GhTree;
use crate::wellinked::{partition_high_degree, Backend, HeuristicDecomposer, PartitionConfig};

/// `ceil(sqrt(n))`, at least 1.
pub fn default_c(n: usize) -> usize {
    let mut c = (n as f64).sqrt().ceil() as usize;
    while c > 1 && (c - 1) * (c - 1) >= n {
        c -= 1;
    }
    while c * c < n {
        c += 1;
    }
    c.max(1)
}

/// Partial tree capturing every mincut of value at most `c` (and none
/// above), built with the reference oracle.
pub fn small_conn(
    g: &SimpleGraph,
    c: usize,
    seed: u64,
    retry_cap: usize,
) -> Result<PartialTreeRun> {
    if c == 0 {
        return Err(Error::InvalidConnectivity);
    }
    if g.n() == 0 {
        return Err(Error::EmptySet);
    }
    let all: Vec<usize> = (0..g.n()).collect();
    let mut oracle = BruteForceOracle::new(c as u64);
    let cfg = PartialTreeConfig {
        seed,
        retry_cap,
        confirm: false,
    };
    partial_tree(&g.to_cap_graph(), &all, c as u64, &mut oracle, &cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastConfig {
    pub seed: u64,
    /// The constant in the `ceil(c ln n / phi)` sampling round count.
    pub rounds_constant: f64,
    pub retry_cap: usize,
    /// Re-check every recorded cut with a max-flow before using it.
    pub confirm: bool,
    pub partition: PartitionConfig,
}

impl Default for FastConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            rounds_constant: 4.0,
            retry_cap: 20,
            confirm: true,
            partition: PartitionConfig {
                backend: Backend::Heuristic(HeuristicDecomposer::default()),
                cert_cap: 10,
            },
        }
    }
}

/// Per-cluster accounting of one refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub level_d: usize,
    pub size: usize,
    pub phi: f64,
    pub rounds: usize,
    /// Largest terminal set handed to isolating cuts by any single-source run.
    pub max_terminals: usize,
    pub ssc_invocations: usize,
    /// Most max-flow calls used by one single-source run.
    pub max_ssc_flows: u64,
    pub refine_flows: u64,
    pub budget: AuxBudget,
    pub max_depth: usize,
}

impl ClusterReport {
    /// `rounds * (ceil(log2 T) + T) + 2` for the largest terminal set seen.
    pub fn ssc_flow_bound(&self) -> u64 {
        let t = self.max_terminals;
        self.rounds as u64 * (ceil_log2(t) as u64 + t as u64) + 2
    }

    pub fn within_bound(&self) -> bool {
        self.max_ssc_flows <= self.ssc_flow_bound()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FastStats {
    pub c: usize,
    pub levels: Vec<usize>,
    pub small_conn: PartialTreeStats,
    pub clusters: Vec<ClusterReport>,
    /// Recursion depth of every partial-tree construction, in order.
    pub depths: Vec<usize>,
    pub flows: u64,
}

impl FastStats {
    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FastRun {
    pub tree: GhTree,
    pub stats: FastStats,
}

/// Hook invoked after the bootstrap (`d = 0`) and after every level, with
/// the level's `d` and the current partial tree.
pub type LevelHook<'a> = dyn FnMut(usize, &PartialTree) + 'a;

/// The doubling pipeline with default threshold `c`.
pub fn gh_tree_fast(g: &SimpleGraph, c: usize, cfg: &FastConfig) -> Result<FastRun> {
    gh_tree_fast_observed(g, c, cfg, &mut |_, _| {})
}

pub fn gh_tree_fast_observed(
    g: &SimpleGraph,
    c: usize,
    cfg: &FastConfig,
    hook: &mut LevelHook<'_>,
) -> Result<FastRun> {
    if c == 0 {
        return Err(Error::InvalidConnectivity);
    }
    let n = g.n();
    let start = flow_calls();
    let mut stats = FastStats {
        c,
        levels: Vec::new(),
        small_conn: PartialTreeStats::default(),
        clusters: Vec::new(),
        depths: Vec::new(),
        flows: 0,
    };
    if n <= 1 {
        return Ok(FastRun {
            tree: GhTree::new(n, [])?,
            stats,
        });
    }
    let boot = small_conn(g, c, rng::derive_seed(cfg.seed, &[0]), cfg.retry_cap)?;
    stats.depths.push(boot.stats.max_depth);
    stats.small_conn = boot.stats;
    let mut pt = boot.tree;
    hook(0, &pt);

    let mut d = c;
    while d < n - 1 {
        stats.levels.push(d);
        let h = sparsify(g, 3 * d)?;
        let parts = partition_high_degree(&h, d, &cfg.partition)?;
        for (j, cluster) in parts.clusters.iter().enumerate() {
            let rcfg = RefineConfig {
                seed: rng::derive_seed(cfg.seed, &[1, d as u64, j as u64]),
                rounds_constant: cfg.rounds_constant,
                n,
                retry_cap: cfg.retry_cap,
                confirm: cfg.confirm,
            };
            let out = refine(g, &h, &pt, cluster, d, &rcfg)?;
            let r = &out.report;
            stats.depths.extend(r.depths.iter().copied());
            stats.clusters.push(ClusterReport {
                level_d: d,
                size: cluster.members.len(),
                phi: cluster.phi,
                rounds: r.rounds,
                max_terminals: r.ssc.iter().map(|s| s.max_terminals).max().unwrap_or(0),
                ssc_invocations: r.ssc.len(),
                max_ssc_flows: r.ssc.iter().map(|s| s.maxflow_calls).max().unwrap_or(0),
                refine_flows: r.flows,
                budget: r.budget,
                max_depth: r.depths.iter().copied().max().unwrap_or(0),
            });
            pt = out.tree;
        }
        hook(d, &pt);
        d *= 2;
    }
    stats.flows = flow_calls() - start;
    let tree = pt.to_gh_tree().map_err(|e| {
        Error::RefinementIntegrity(format!("pipeline ended with a partial tree: {e}"))
    })?;
    Ok(FastRun { tree, stats })
}

/// Gomory-Hu's construction: `n - 1` split steps, each one max-flow on the
/// graph with the other subtrees contracted.
pub fn gh_tree_classic<G: CapacityGraph>(g: &G) -> Result<GhTree> {
    let n = g.vertex_count();
    if n <= 1 {
        return GhTree::new(n, []);
    }
    let cg = g.to_cap_graph();
    let mut tree = PartialTree::trivial(n, 0);
    for u in 1..n {
        let x = tree.terminal_of(u);
        split_part(&cg, &mut tree, x, u, None)?;
    }
    tree.to_gh_tree()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub u: usize,
    pub v: usize,
    /// Max-flow value.
    pub expected: u64,
    /// Tree path minimum.
    pub got: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub pairs: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares every pair's tree path minimum with an independent max-flow.
pub fn verify_gh_tree<G: CapacityGraph>(g: &G, t: &GhTree) -> Result<VerifyReport> {
    let n = g.vertex_count();
    if t.n() != n {
        return Err(Error::MalformedTree(format!(
            "tree spans {} vertices, graph has {n}",
            t.n()
        )));
    }
    let cg = g.to_cap_graph();
    let all = t.all_pairs();
    let mut report = VerifyReport {
        pairs: 0,
        mismatches: Vec::new(),
    };
    for u in 0..n {
        for v in u + 1..n {
            report.pairs += 1;
            let expected = maxflow::max_flow_value(&cg, u, v)?;
            if expected != all[u][v] {
                report.mismatches.push(Mismatch {
                    u,
                    v,
                    expected,
                    got: all[u][v],
                });
            }
        }
    }
    Ok(report)
}

pub fn query_mincut(t: &GhTree, u: usize, v: usize) -> Result<u64> {
    t.query_mincut(u, v)
}
