//! Well-linked partitioning of the high-degree vertices.
//!
//! A demand-weighted expander decomposition is computed by a pluggable
//! [`Decomposer`]; clusters whose boundary is small relative to their
//! terminal count are kept, and each kept terminal set is certified with the
//! best well-linkedness parameter that can be proven for it.

use crate::error::{Error, Result};
use crate::graph::{CapGraph, CapacityGraph, SimpleGraph};
use crate::maxflow;
use crate::partial_tree::{steiner_connectivity, Connectivity};
use crate::sstmincut::check_phi;

/// Nonnegative per-vertex demands.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandVector(Vec<f64>);

impl DemandVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
            return Err(Error::InvalidDemand);
        }
        Ok(Self(values))
    }

    /// `value` on every vertex of `set`, zero elsewhere.
    pub fn on_set(n: usize, set: &[usize], value: f64) -> Result<Self> {
        let mut v = vec![0.0; n];
        for &x in set {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            v[x] = value;
        }
        Self::new(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    /// Partition of the vertex set, each cluster ascending.
    pub clusters: Vec<Vec<usize>>,
    /// Certified expansion of each induced cluster under the restricted
    /// demands; `None` when at most one member has positive demand.
    pub expansion: Vec<Option<f64>>,
    pub inter_cluster_edges: usize,
    /// Smallest certified expansion over all clusters (infinite if vacuous).
    pub achieved_phi: f64,
}

/// Demand-weighted expander decomposition back end.
pub trait Decomposer {
    fn name(&self) -> &'static str;

    /// Declared factor `B` in the crossing-edge bound `B * phi * d(V)`.
    fn budget(&self) -> f64 {
        1.0
    }

    /// For one connected piece with at least two positive-demand vertices:
    /// either a side of expansion below `phi`, or a certified lower bound on
    /// the piece's expansion.
    fn probe(&self, g: &SimpleGraph, demands: &[f64], phi: f64) -> Result<Probe>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Probe {
    Split(Vec<usize>),
    Expander(f64),
}

/// Exhaustive sparsest-demand-cut search, for pieces of at most `cap`
/// vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactDecomposer {
    pub cap: usize,
}

impl Default for ExactDecomposer {
    fn default() -> Self {
        Self { cap: 20 }
    }
}

/// Sweep-and-local-search cut finder for large pieces, falling back to
/// exhaustive search for pieces of at most `exact_cap` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicDecomposer {
    pub exact_cap: usize,
    /// Number of BFS sweep origins per piece.
    pub starts: usize,
}

impl Default for HeuristicDecomposer {
    fn default() -> Self {
        Self {
            exact_cap: 16,
            starts: 16,
        }
    }
}

fn ratio(cut: f64, a: f64, b: f64) -> Option<f64> {
    let m = a.min(b);
    (m > 0.0).then(|| cut / m)
}

/// Minimum expansion over all proper sides, with a side attaining it.
fn exact_sparsest(g: &SimpleGraph, demands: &[f64]) -> (Option<f64>, Vec<usize>) {
    let s = g.n();
    let nbr: Vec<u32> = (0..s)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let total: f64 = demands.iter().sum();
    let (mut mask, mut cut, mut dem) = (0u32, 0i64, 0.0f64);
    let mut best: Option<(f64, u32)> = None;
    // Gray-code walk over all sides avoiding the last vertex.
    for i in 1u32..1 << (s - 1) {
        let v = i.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let deg = g.degree(v) as i64;
        if mask & bit == 0 {
            cut += deg - 2 * (nbr[v] & mask).count_ones() as i64;
            mask |= bit;
            dem += demands[v];
        } else {
            mask &= !bit;
            cut -= deg - 2 * (nbr[v] & mask).count_ones() as i64;
            dem -= demands[v];
        }
        if let Some(r) = ratio(cut as f64, dem, total - dem) {
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, mask));
            }
        }
    }
    match best {
        Some((r, m)) => (Some(r), (0..s).filter(|&v| m >> v & 1 == 1).collect()),
        None => (None, Vec::new()),
    }
}

impl ExactDecomposer {
    fn probe_exact(g: &SimpleGraph, demands: &[f64], phi: f64, cap: usize) -> Result<Probe> {
        if g.n() > cap.min(31) {
            return Err(Error::TooLargeForExhaustive { size: g.n(), cap });
        }
        match exact_sparsest(g, demands) {
            (Some(r), side) if r < phi => Ok(Probe::Split(side)),
            (Some(r), _) => Ok(Probe::Expander(r)),
            (None, _) => Ok(Probe::Expander(f64::INFINITY)),
        }
    }
}

impl Decomposer for ExactDecomposer {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn probe(&self, g: &SimpleGraph, demands: &[f64], phi: f64) -> Result<Probe> {
        Self::probe_exact(g, demands, phi, self.cap)
    }
}

/// Incremental cut/demand bookkeeping for a side of `g`.
struct Side<'a> {
    g: &'a SimpleGraph,
    demands: &'a [f64],
    total: f64,
    inside: Vec<bool>,
    size: usize,
    cut: i64,
    dem: f64,
}

impl<'a> Side<'a> {
    fn new(g: &'a SimpleGraph, demands: &'a [f64]) -> Self {
        Self {
            g,
            demands,
            total: demands.iter().sum(),
            inside: vec![false; g.n()],
            size: 0,
            cut: 0,
            dem: 0.0,
        }
    }

    fn toggle(&mut self, v: usize) {
        let inner = self
            .g
            .neighbors(v)
            .iter()
            .filter(|&&w| self.inside[w])
            .count() as i64;
        let deg = self.g.degree(v) as i64;
        if self.inside[v] {
            self.cut -= deg - 2 * inner;
            self.dem -= self.demands[v];
            self.size -= 1;
        } else {
            self.cut += deg - 2 * inner;
            self.dem += self.demands[v];
            self.size += 1;
        }
        self.inside[v] = !self.inside[v];
    }

    fn ratio(&self) -> Option<f64> {
        if self.size == 0 || self.size == self.g.n() {
            return None;
        }
        ratio(self.cut as f64, self.dem, self.total - self.dem)
    }

    fn members(&self) -> Vec<usize> {
        (0..self.g.n()).filter(|&v| self.inside[v]).collect()
    }
}

fn bfs_order(g: &SimpleGraph, start: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut order = vec![start];
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

impl Decomposer for HeuristicDecomposer {
    fn name(&self) -> &'static str {
        "heuristic"
    }

    fn probe(&self, g: &SimpleGraph, demands: &[f64], phi: f64) -> Result<Probe> {
        if g.n() <= self.exact_cap {
            return ExactDecomposer::probe_exact(g, demands, phi, self.exact_cap);
        }
        let n = g.n();
        let positive: Vec<usize> = (0..n).filter(|&v| demands[v] > 0.0).collect();
        let total: f64 = demands.iter().sum();
        let cg = g.to_cap_graph();
        // Any side splitting the positive-demand vertices cuts at least their
        // Steiner connectivity, and its smaller demand is at most half.
        let lambda = match steiner_connectivity(&cg, &positive)? {
            Connectivity::Finite(l) => l as f64,
            Connectivity::Infinite => return Ok(Probe::Expander(f64::INFINITY)),
        };
        let bound = 2.0 * lambda / total;
        if bound >= phi {
            return Ok(Probe::Expander(bound));
        }

        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut consider = |r: Option<f64>, side: &dyn Fn() -> Vec<usize>| {
            if let Some(r) = r {
                if best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, side()));
                }
            }
        };
        for &v in &positive[1..] {
            let cut = maxflow::st_mincut_minimal(&cg, positive[0], v)?;
            if cut.value as f64 == lambda {
                let mut side = Side::new(g, demands);
                for &w in &cut.side {
                    side.toggle(w);
                }
                consider(side.ratio(), &|| side.members());
                break;
            }
        }
        let stride = n.div_ceil(self.starts.max(1)).max(1);
        for start in (0..n).step_by(stride) {
            let mut side = Side::new(g, demands);
            for v in bfs_order(g, start) {
                side.toggle(v);
                consider(side.ratio(), &|| side.members());
            }
        }
        let Some((mut r, members)) = best else {
            return Ok(Probe::Expander(bound));
        };
        let mut side = Side::new(g, demands);
        for &v in &members {
            side.toggle(v);
        }
        for _ in 0..n {
            let mut improved = false;
            for v in 0..n {
                side.toggle(v);
                match side.ratio() {
                    Some(nr) if nr < r => {
                        r = nr;
                        improved = true;
                    }
                    _ => side.toggle(v),
                }
            }
            if !improved {
                break;
            }
        }
        if r < phi {
            Ok(Probe::Split(side.members()))
        } else {
            Ok(Probe::Expander(bound))
        }
    }
}

/// Recursively splits `g` along cuts of expansion below `phi` until every
/// piece is certified or vacuous. Disconnected pieces are split along their
/// components first.
pub fn expander_decompose(
    g: &SimpleGraph,
    demands: &DemandVector,
    phi: f64,
    decomposer: &dyn Decomposer,
) -> Result<DecompositionResult> {
    check_phi(phi)?;
    let dem = demands.as_slice();
    if dem.len() != g.n() {
        return Err(Error::GroupingNotTotal {
            got: dem.len(),
            expected: g.n(),
        });
    }
    let mut clusters = Vec::new();
    let mut expansion = Vec::new();
    let mut stack = vec![(0..g.n()).collect::<Vec<usize>>()];
    while let Some(set) = stack.pop() {
        if set.is_empty() {
            continue;
        }
        let (sub, map) = g.induced(&set);
        let comps = sub.components();
        if comps.len() > 1 {
            for c in comps {
                stack.push(c.iter().map(|&i| map[i]).collect());
            }
            continue;
        }
        let sub_dem: Vec<f64> = map.iter().map(|&v| dem[v]).collect();
        if sub_dem.iter().filter(|&&x| x > 0.0).count() < 2 {
            clusters.push(set);
            expansion.push(None);
            continue;
        }
        match decomposer.probe(&sub, &sub_dem, phi)? {
            Probe::Split(side) => {
                let mut inside = vec![false; set.len()];
                for &i in &side {
                    inside[i] = true;
                }
                let (a, b): (Vec<usize>, Vec<usize>) = (0..set.len()).partition(|&i| inside[i]);
                stack.push(b.into_iter().map(|i| map[i]).collect());
                stack.push(a.into_iter().map(|i| map[i]).collect());
            }
            Probe::Expander(r) => {
                clusters.push(set);
                expansion.push(Some(r));
            }
        }
    }
    let mut order: Vec<usize> = (0..clusters.len()).collect();
    order.sort_by_key(|&i| clusters[i][0]);
    let clusters: Vec<Vec<usize>> = order.iter().map(|&i| clusters[i].clone()).collect();
    let expansion: Vec<Option<f64>> = order.iter().map(|&i| expansion[i]).collect();
    let owner = owner_map(g.n(), &clusters);
    let inter_cluster_edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| owner[u] != owner[v])
        .count();
    let achieved_phi = expansion
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(DecompositionResult {
        clusters,
        expansion,
        inter_cluster_edges,
        achieved_phi,
    })
}

fn owner_map(n: usize, clusters: &[Vec<usize>]) -> Vec<usize> {
    let mut owner = vec![usize::MAX; n];
    for (i, c) in clusters.iter().enumerate() {
        for &v in c {
            owner[v] = i;
        }
    }
    owner
}

/// A set `X` whose members have degree at least `d` and which is
/// `(d, phi)`-well-linked in the host graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WellLinkedCluster {
    pub members: Vec<usize>,
    pub d: usize,
    pub phi: f64,
}

/// Available decomposition back ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact(ExactDecomposer),
    Heuristic(HeuristicDecomposer),
}

impl Backend {
    pub fn decomposer(&self) -> &dyn Decomposer {
        match self {
            Backend::Exact(d) => d,
            Backend::Heuristic(d) => d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionConfig {
    pub backend: Backend,
    /// Clusters with at most this many members get an exact, exhaustive
    /// well-linkedness certificate; larger ones a connectivity bound.
    pub cert_cap: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            backend: Backend::Heuristic(HeuristicDecomposer::default()),
            cert_cap: 12,
        }
    }
}

/// Diagnostics of one filtering pass.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetReport {
    pub clusters: Vec<WellLinkedCluster>,
    /// The decomposition parameter that finally met the coverage target.
    pub phi_used: f64,
    pub attempts: usize,
    pub u_size: usize,
    pub covered: usize,
    pub inter_cluster_edges: usize,
    /// `sum over U of x(v)`, which equals the total boundary of clusters
    /// meeting `U`.
    pub x_sum: usize,
    /// Whether the crossing edges met `budget * phi * d(V)`.
    pub budget_met: bool,
    /// Whether every kept cluster `V_i` has at least `d / 2` vertices.
    pub size_bound_ok: bool,
}

/// Picks disjoint well-linked subsets of `u` covering at least half of it.
pub fn wellinked_subsets(
    g: &SimpleGraph,
    u: &[usize],
    d: usize,
    cfg: &PartitionConfig,
) -> Result<SubsetReport> {
    if d == 0 {
        return Err(Error::InvalidConnectivity);
    }
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    for &v in &u {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
        if g.degree(v) < d {
            return Err(Error::DegreeBelowThreshold {
                vertex: v,
                degree: g.degree(v),
                d,
            });
        }
    }
    let decomposer = cfg.backend.decomposer();
    let mut phi = 1.0 / (8.0 * decomposer.budget());
    let mut report = SubsetReport {
        clusters: Vec::new(),
        phi_used: phi,
        attempts: 0,
        u_size: u.len(),
        covered: 0,
        inter_cluster_edges: 0,
        x_sum: 0,
        budget_met: true,
        size_bound_ok: true,
    };
    if u.is_empty() {
        return Ok(report);
    }
    let demands = DemandVector::on_set(g.n(), &u, d as f64)?;
    let mut in_u = vec![false; g.n()];
    for &v in &u {
        in_u[v] = true;
    }
    let cap = g.to_cap_graph();
    loop {
        report.attempts += 1;
        let dec = expander_decompose(g, &demands, phi, decomposer)?;
        let owner = owner_map(g.n(), &dec.clusters);
        let mut boundary = vec![0usize; dec.clusters.len()];
        for &(a, b) in g.edges() {
            if owner[a] != owner[b] {
                boundary[owner[a]] += 1;
                boundary[owner[b]] += 1;
            }
        }
        let mut kept = Vec::new();
        let mut x_sum = 0;
        for (i, c) in dec.clusters.iter().enumerate() {
            let x: Vec<usize> = c.iter().copied().filter(|&v| in_u[v]).collect();
            if x.is_empty() {
                continue;
            }
            x_sum += boundary[i];
            // x(v) = boundary / |X_i| <= d / 2
            if 2 * boundary[i] <= d * x.len() {
                kept.push((i, x));
            }
        }
        let covered: usize = kept.iter().map(|(_, x)| x.len()).sum();
        if 2 * covered >= u.len() {
            report.phi_used = phi;
            report.covered = covered;
            report.inter_cluster_edges = dec.inter_cluster_edges;
            report.x_sum = x_sum;
            report.budget_met = dec.inter_cluster_edges as f64
                <= decomposer.budget() * phi * demands.total() + 1e-9;
            report.size_bound_ok = kept.iter().all(|(i, _)| 2 * dec.clusters[*i].len() >= d);
            for (i, x) in kept {
                let phi_x = certify(&cap, &x, d, dec.expansion[i], cfg.cert_cap)?;
                report.clusters.push(WellLinkedCluster {
                    members: x,
                    d,
                    phi: phi_x,
                });
            }
            return Ok(report);
        }
        // Too few vertices survived the filter: the decomposition crossed
        // too many edges for this phi, so ask for a coarser one.
        phi /= 2.0;
    }
}

/// Best provable well-linkedness of `x` in `g`, at most 1.
fn certify(
    g: &CapGraph,
    x: &[usize],
    d: usize,
    expansion: Option<f64>,
    cert_cap: usize,
) -> Result<f64> {
    if x.len() == 1 {
        return Ok(1.0);
    }
    let phi = if x.len() <= cert_cap {
        exact_wellinked_phi(g, x, d)?
    } else {
        let lambda = match steiner_connectivity(g, x)? {
            Connectivity::Finite(l) => l as f64,
            Connectivity::Infinite => f64::INFINITY,
        };
        let bound = lambda / (d as f64 * (x.len() / 2) as f64);
        bound.max(expansion.unwrap_or(0.0))
    };
    let phi = phi.min(1.0);
    if phi > 0.0 {
        Ok(phi)
    } else {
        Err(Error::InvalidPhi(phi))
    }
}

/// Calls `f(A, B)` for every bipartition of `x` with the last member in `B`.
fn for_each_bipartition(
    x: &[usize],
    mut f: impl FnMut(&[usize], &[usize]) -> Result<()>,
) -> Result<()> {
    let k = x.len();
    for mask in 1u64..1 << (k - 1) {
        let (a, b): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| mask >> i & 1 == 1);
        let a: Vec<usize> = a.into_iter().map(|i| x[i]).collect();
        let b: Vec<usize> = b.into_iter().map(|i| x[i]).collect();
        f(&a, &b)?;
    }
    Ok(())
}

/// `min over bipartitions (A, B) of mincut(A, B) / (d * min(|A|, |B|))`.
pub fn exact_wellinked_phi(g: &CapGraph, x: &[usize], d: usize) -> Result<f64> {
    let mut best = f64::INFINITY;
    for_each_bipartition(x, |a, b| {
        let cut = maxflow::set_mincut(g, a, b)?;
        best = best.min(cut.value as f64 / (d as f64 * a.len().min(b.len()) as f64));
        Ok(())
    })?;
    Ok(best)
}

pub const DEFAULT_VERIFY_CAP: usize = 12;

/// Exhaustive check of the well-linked definition for `|X| <= 12`.
pub fn verify_wellinked(g: &SimpleGraph, x: &[usize], d: usize, phi: f64) -> Result<bool> {
    verify_wellinked_capped(g, x, d, phi, DEFAULT_VERIFY_CAP)
}

pub fn verify_wellinked_capped(
    g: &SimpleGraph,
    x: &[usize],
    d: usize,
    phi: f64,
    cap: usize,
) -> Result<bool> {
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    if x.len() > cap {
        return Err(Error::TooLargeForExhaustive { size: x.len(), cap });
    }
    if let Some(&v) = x.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    if x.iter().any(|&v| g.degree(v) < d) {
        return Ok(false);
    }
    if x.len() < 2 {
        return Ok(true);
    }
    let cg = g.to_cap_graph();
    let mut ok = true;
    for_each_bipartition(&x, |a, b| {
        if ok {
            let cut = maxflow::set_mincut(&cg, a, b)?;
            let need = d as f64 * phi * a.len().min(b.len()) as f64;
            ok = cut.value as f64 >= need - 1e-9;
        }
        Ok(())
    })?;
    Ok(ok)
}

/// All filtering passes of one [`partition_high_degree`] call.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub clusters: Vec<WellLinkedCluster>,
    pub passes: Vec<SubsetReport>,
}

/// `2 ceil(log2 n) n / d`, the cluster-count ceiling.
pub fn cluster_count_bound(n: usize, d: usize) -> f64 {
    2.0 * crate::isolating::ceil_log2(n) as f64 * n as f64 / d as f64
}

/// Partitions `V_{>=d}` into well-linked clusters by repeatedly covering at
/// least half of what remains.
pub fn partition_high_degree(
    g: &SimpleGraph,
    d: usize,
    cfg: &PartitionConfig,
) -> Result<PartitionReport> {
    if d == 0 {
        return Err(Error::InvalidConnectivity);
    }
    let mut remaining = g.high_degree(d);
    let mut out = PartitionReport {
        clusters: Vec::new(),
        passes: Vec::new(),
    };
    while !remaining.is_empty() {
        let pass = wellinked_subsets(g, &remaining, d, cfg)?;
        let mut covered = vec![false; g.n()];
        for c in &pass.clusters {
            for &v in &c.members {
                covered[v] = true;
            }
        }
        remaining.retain(|&v| !covered[v]);
        out.clusters.extend(pass.clusters.iter().cloned());
        out.passes.push(pass);
    }
    Ok(out)
}
