//! Partial Gomory-Hu trees and the reduction that builds them from a
//! capped single-source mincut verification oracle plus max-flow.

use crate::error::{Error, Result};
use crate::graph::{contract, CapGraph, Cut, VertexGrouping};
use crate::isolating::isolating_cuts;
use crate::maxflow::{self, flow_calls};
use crate::rng::{self, Stream};
use crate::tree::{path_minima, GhTree};
use crate::unionfind::UnionFind;
use rand::Rng;

/// A tree on a terminal subset together with a partition of all vertices in
/// which every part holds exactly one terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTree {
    n: usize,
    terminals: Vec<usize>,
    edges: Vec<(usize, usize, u64)>,
    part_of: Vec<usize>,
}

impl PartialTree {
    /// One part containing every vertex, represented by `terminal`.
    pub fn trivial(n: usize, terminal: usize) -> Self {
        assert!(terminal < n, "terminal out of range");
        Self {
            n,
            terminals: vec![terminal],
            edges: Vec::new(),
            part_of: vec![terminal; n],
        }
    }

    /// Builds and validates a partial tree. `part_of[v]` names the terminal of
    /// v's part; terminals are exactly the fixed points of `part_of`.
    pub fn new(part_of: Vec<usize>, edges: Vec<(usize, usize, u64)>) -> Result<Self> {
        let n = part_of.len();
        if n == 0 {
            return Err(Error::MalformedTree("no vertices".into()));
        }
        for (v, &t) in part_of.iter().enumerate() {
            if t >= n {
                return Err(Error::VertexOutOfRange { vertex: t, n });
            }
            if part_of[t] != t {
                return Err(Error::MalformedTree(format!(
                    "vertex {v} points at {t}, which is not a terminal"
                )));
            }
        }
        let terminals: Vec<usize> = (0..n).filter(|&v| part_of[v] == v).collect();
        if edges.len() + 1 != terminals.len() {
            return Err(Error::MalformedTree(format!(
                "{} edges over {} terminals",
                edges.len(),
                terminals.len()
            )));
        }
        let mut uf = UnionFind::new(n);
        let mut normalised = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a >= n || b >= n || part_of[a] != a || part_of[b] != b {
                return Err(Error::MalformedTree(format!(
                    "edge ({a}, {b}) leaves the terminal set"
                )));
            }
            if !uf.union(a, b) {
                return Err(Error::MalformedTree(format!(
                    "edge ({a}, {b}) closes a cycle"
                )));
            }
            normalised.push((a.min(b), a.max(b), w));
        }
        normalised.sort_unstable();
        Ok(Self {
            n,
            terminals,
            edges: normalised,
            part_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Terminals, ascending.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    /// Tree edges `(a, b, weight)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn part_of(&self) -> &[usize] {
        &self.part_of
    }

    pub fn terminal_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.part_of[v] == v
    }

    /// Members of the part whose terminal is `t`, ascending.
    pub fn part(&self, t: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.part_of[v] == t).collect()
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        adj
    }

    /// Minimum tree-path weight between the parts of `u` and `v`, or `None`
    /// when they share a part.
    pub fn separation(&self, u: usize, v: usize) -> Option<u64> {
        let (a, b) = (self.part_of[u], self.part_of[v]);
        if a == b {
            return None;
        }
        path_minima(&self.adjacency(), a)[b]
    }

    /// The full tree, if every part is a singleton.
    pub fn to_gh_tree(&self) -> Result<GhTree> {
        if self.terminals.len() != self.n {
            return Err(Error::MalformedTree(format!(
                "{} of {} vertices are terminals",
                self.terminals.len(),
                self.n
            )));
        }
        GhTree::new(self.n, self.edges.iter().copied())
    }

    /// Whether `self` refines `coarse`: every old terminal is still a
    /// terminal, every new part lies inside an old part, and contracting the
    /// new terminals by old part gives back the old tree exactly.
    pub fn is_refinement_of(&self, coarse: &PartialTree) -> bool {
        if self.n != coarse.n {
            return false;
        }
        if coarse.terminals.iter().any(|&t| !self.is_terminal(t)) {
            return false;
        }
        let old = |v: usize| coarse.part_of[v];
        if (0..self.n).any(|v| old(v) != old(self.part_of[v])) {
            return false;
        }
        let mut inside = UnionFind::new(self.n);
        let mut inside_edges = 0;
        let mut across = Vec::new();
        for &(a, b, w) in &self.edges {
            let (oa, ob) = (old(a), old(b));
            if oa == ob {
                inside.union(a, b);
                inside_edges += 1;
            } else {
                across.push((oa.min(ob), oa.max(ob), w));
            }
        }
        across.sort_unstable();
        let connected = self
            .terminals
            .iter()
            .all(|&t| inside.find(t) == inside.find(old(t)));
        connected
            && inside_edges + coarse.terminals.len() == self.terminals.len()
            && across == coarse.edges
    }

    /// Makes `u` (a member of `x`'s part) the terminal of that part.
    pub(crate) fn replace_terminal(&mut self, x: usize, u: usize) {
        debug_assert_eq!(self.part_of[u], x);
        for p in self.part_of.iter_mut().filter(|p| **p == x) {
            *p = u;
        }
        for e in &mut self.edges {
            if e.0 == x {
                e.0 = u;
            }
            if e.1 == x {
                e.1 = u;
            }
            *e = (e.0.min(e.1), e.0.max(e.1), e.2);
        }
        self.edges.sort_unstable();
        let i = self.terminals.binary_search(&x).expect("terminal");
        self.terminals.remove(i);
        let j = self.terminals.binary_search(&u).unwrap_err();
        self.terminals.insert(j, u);
    }
}

/// Outcome of [`split_part`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOutcome {
    Split(u64),
    /// The mincut exceeded the limit; the tree is unchanged.
    Exceeded(u64),
}

/// One Gomory-Hu step inside the part of terminal `x`: contracts every
/// component of `T - x` to a vertex, takes the `u`-minimal `(u, x)`-mincut,
/// and makes `u` a new terminal on its side. With a `limit`, the split is
/// only applied when the cut value does not exceed it. One max-flow call.
pub fn split_part(
    g: &CapGraph,
    tree: &mut PartialTree,
    x: usize,
    u: usize,
    limit: Option<u64>,
) -> Result<SplitOutcome> {
    if g.n() != tree.n {
        return Err(Error::GroupingNotTotal {
            got: tree.n,
            expected: g.n(),
        });
    }
    if x >= tree.n || !tree.is_terminal(x) {
        return Err(Error::MalformedTree(format!("{x} is not a terminal")));
    }
    if u >= tree.n || tree.part_of[u] != x || u == x {
        return Err(Error::MalformedTree(format!(
            "{u} is not a non-terminal of part {x}"
        )));
    }
    let adj = tree.adjacency();
    // component id (index into adj[x]) for every terminal other than x
    let mut comp = vec![usize::MAX; tree.n];
    for (j, &(c, _)) in adj[x].iter().enumerate() {
        comp[c] = j;
        let mut stack = vec![c];
        while let Some(a) = stack.pop() {
            for &(b, _) in &adj[a] {
                if b != x && comp[b] == usize::MAX {
                    comp[b] = j;
                    stack.push(b);
                }
            }
        }
    }
    let part = tree.part(x);
    let mut local = vec![usize::MAX; tree.n];
    for (i, &v) in part.iter().enumerate() {
        local[v] = i;
    }
    let group: Vec<usize> = (0..tree.n)
        .map(|v| {
            if tree.part_of[v] == x {
                local[v]
            } else {
                part.len() + comp[tree.part_of[v]]
            }
        })
        .collect();
    let aux = contract(g, &VertexGrouping::new(group)?)?;
    let cut = maxflow::st_mincut_minimal(&aux, local[u], local[x])?;
    if limit.is_some_and(|l| cut.value > l) {
        return Ok(SplitOutcome::Exceeded(cut.value));
    }
    let mut on_side = vec![false; aux.n()];
    for &i in &cut.side {
        on_side[i] = true;
    }
    for &v in &part {
        if on_side[local[v]] {
            tree.part_of[v] = u;
        }
    }
    let moved: Vec<usize> = adj[x]
        .iter()
        .enumerate()
        .filter(|&(j, _)| on_side[part.len() + j])
        .map(|(_, &(c, _))| c)
        .collect();
    for e in &mut tree.edges {
        let other = if e.0 == x {
            e.1
        } else if e.1 == x {
            e.0
        } else {
            continue;
        };
        if moved.contains(&other) {
            *e = (u.min(other), u.max(other), e.2);
        }
    }
    tree.edges.push((x.min(u), x.max(u), cut.value));
    tree.edges.sort_unstable();
    let j = tree.terminals.binary_search(&u).unwrap_err();
    tree.terminals.insert(j, u);
    Ok(SplitOutcome::Split(cut.value))
}

/// Steiner connectivity of a terminal set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Connectivity {
    Finite(u64),
    /// Fewer than two terminals.
    Infinite,
}

impl Connectivity {
    pub fn exceeds(self, k: u64) -> bool {
        match self {
            Connectivity::Finite(l) => l > k,
            Connectivity::Infinite => true,
        }
    }
}

/// Minimum pairwise mincut over `u`, via `|U| - 1` flows from its smallest
/// member. Also returns a pair attaining it.
fn steiner_with_witness(
    g: &CapGraph,
    u: &[usize],
) -> Result<(Connectivity, Option<(usize, usize)>)> {
    let (&u0, rest) = u.split_first().ok_or(Error::EmptySet)?;
    let mut best: Option<(u64, usize)> = None;
    for &v in rest {
        let f = maxflow::max_flow_value(g, u0, v)?;
        if best.is_none_or(|(b, _)| f < b) {
            best = Some((f, v));
        }
    }
    Ok(match best {
        Some((f, v)) => (Connectivity::Finite(f), Some((u0, v))),
        None => (Connectivity::Infinite, None),
    })
}

pub fn steiner_connectivity(g: &CapGraph, u: &[usize]) -> Result<Connectivity> {
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    Ok(steiner_with_witness(g, &u)?.0)
}

/// A batch of claimed capped mincut values from one source.
pub struct SscQuery<'a> {
    pub graph: &'a CapGraph,
    /// Vertex of `graph` -> vertex of the root instance; `None` for vertices
    /// created by contraction. Terminals are never contracted.
    pub origin: &'a [Option<usize>],
    pub terminals: &'a [usize],
    pub source: usize,
    /// `(v, claimed value)`; every claim is the value of some `(source, v)`-cut.
    pub claims: &'a [(usize, u64)],
}

/// Verifies claims `lambda_v == min(mincut(source, v), k)`.
pub trait SscOracle {
    fn verify(&mut self, query: &SscQuery<'_>) -> Result<Vec<bool>>;

    /// Called with an exact `min(mincut, k)` value, in root ids, whenever the
    /// reduction learns one that contradicts an earlier positive answer.
    fn observe(&mut self, _source: usize, _v: usize, _value: u64) {}
}

/// Reference oracle: one max-flow per claim on the queried graph.
#[derive(Debug, Clone)]
pub struct BruteForceOracle {
    k: u64,
}

impl BruteForceOracle {
    pub fn new(k: u64) -> Self {
        Self { k }
    }
}

pub fn bruteforce_ssc_oracle(k: u64) -> BruteForceOracle {
    BruteForceOracle::new(k)
}

impl SscOracle for BruteForceOracle {
    fn verify(&mut self, q: &SscQuery<'_>) -> Result<Vec<bool>> {
        q.claims
            .iter()
            .map(|&(v, claim)| {
                let f = maxflow::max_flow_value(q.graph, q.source, v)?;
                Ok(claim == f.min(self.k))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    /// Level whose `D` was largest; `None` when no level recorded anything.
    pub level: Option<usize>,
    /// Union of `S_v ∩ U` over the recorded cuts, ascending.
    pub d: Vec<usize>,
    /// Recorded `(v, S_v)` pairs of the chosen level.
    pub cuts: Vec<(usize, Cut)>,
    /// `R^0 ⊇ R^1 ⊇ ...`
    pub r_levels: Vec<Vec<usize>>,
}

/// One sampling pass: at each level, isolating cuts on `R^i`, oracle
/// verification of `|∂S_v|`, and collection of the verified, balanced sides.
/// Returns the level with the largest union.
pub fn partial_tree_step(
    g: &CapGraph,
    s: usize,
    u: &[usize],
    k: u64,
    oracle: &mut dyn SscOracle,
    origin: &[Option<usize>],
    rng: &mut Stream,
) -> Result<StepResult> {
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.binary_search(&s).is_err() {
        return Err(Error::SourceNotInSet(s));
    }
    let mut in_u = vec![false; g.n()];
    for &v in &u {
        in_u[v] = true;
    }
    let levels = usize::BITS - 1 - u.len().leading_zeros();
    let mut best = StepResult {
        level: None,
        d: Vec::new(),
        cuts: Vec::new(),
        r_levels: Vec::new(),
    };
    let mut r = u.clone();
    for i in 0..=levels as usize {
        best.r_levels.push(r.clone());
        if r.len() >= 2 {
            let iso = isolating_cuts(g, &r)?;
            let claims: Vec<(usize, u64)> = iso
                .cuts
                .iter()
                .filter(|(v, c)| *v != s && c.value <= k)
                .map(|(v, c)| (*v, c.value))
                .collect();
            let answers = oracle.verify(&SscQuery {
                graph: g,
                origin,
                terminals: &r,
                source: s,
                claims: &claims,
            })?;
            let mut d = Vec::new();
            let mut cuts = Vec::new();
            for (&(v, _), ok) in claims.iter().zip(answers) {
                let cut = iso.get(v).expect("cut for every terminal");
                let hits: Vec<usize> = cut.side.iter().copied().filter(|&w| in_u[w]).collect();
                if ok && 2 * hits.len() <= u.len() {
                    d.extend(hits);
                    cuts.push((v, cut.clone()));
                }
            }
            if d.len() > best.d.len() {
                d.sort_unstable();
                best.level = Some(i);
                best.d = d;
                best.cuts = cuts;
            }
        }
        r.retain(|&v| v == s || rng.gen_bool(0.5));
    }
    Ok(best)
}

/// A recursive sub-result to be attached by [`combine`].
pub struct CombinePiece<'a> {
    pub tree: &'a PartialTree,
    /// Piece vertex -> parent vertex; `None` for the contracted vertex.
    pub to_parent: &'a [Option<usize>],
    /// The piece's contracted vertex (everything outside its side).
    pub anchor: usize,
    /// The vertex of the large instance its side was contracted to.
    pub large_anchor: usize,
    pub weight: u64,
}

/// Joins the large tree and every piece with one edge per piece, between the
/// terminals of the parts holding the two anchors, and restricts the union
/// of partitions to parent vertices.
pub fn combine(
    parent_n: usize,
    large: &PartialTree,
    large_to_parent: &[Option<usize>],
    pieces: &[CombinePiece<'_>],
) -> Result<PartialTree> {
    let mut part_of = vec![usize::MAX; parent_n];
    let mut edges = Vec::new();
    let mut absorb = |tree: &PartialTree, map: &[Option<usize>]| -> Result<()> {
        if map.len() != tree.n {
            return Err(Error::GroupingNotTotal {
                got: map.len(),
                expected: tree.n,
            });
        }
        let lift = |t: usize| {
            map[t]
                .ok_or_else(|| Error::MalformedTree(format!("terminal {t} is a contracted vertex")))
        };
        for (i, &p) in map.iter().enumerate() {
            if let Some(p) = p {
                if p >= parent_n {
                    return Err(Error::VertexOutOfRange {
                        vertex: p,
                        n: parent_n,
                    });
                }
                part_of[p] = lift(tree.part_of[i])?;
            }
        }
        for &(a, b, w) in &tree.edges {
            edges.push((lift(a)?, lift(b)?, w));
        }
        Ok(())
    };
    absorb(large, large_to_parent)?;
    for piece in pieces {
        absorb(piece.tree, piece.to_parent)?;
    }
    for piece in pieces {
        if piece.anchor >= piece.tree.n {
            return Err(Error::MissingAnchor(format!(
                "piece anchor {}",
                piece.anchor
            )));
        }
        if piece.large_anchor >= large.n {
            return Err(Error::MissingAnchor(format!(
                "large anchor {}",
                piece.large_anchor
            )));
        }
        let x = piece.to_parent[piece.tree.part_of[piece.anchor]]
            .ok_or_else(|| Error::MissingAnchor("piece terminal is contracted".into()))?;
        let y = large_to_parent[large.part_of[piece.large_anchor]]
            .ok_or_else(|| Error::MissingAnchor("large terminal is contracted".into()))?;
        edges.push((x, y, piece.weight));
    }
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(Error::MalformedTree(format!(
            "vertex {v} not covered by any piece"
        )));
    }
    PartialTree::new(part_of, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialTreeConfig {
    pub seed: u64,
    /// Failed sampling passes allowed per node before a classical split.
    pub retry_cap: usize,
    /// Re-check every recorded cut with one max-flow before using it, so an
    /// oracle that wrongly says "yes" cannot corrupt the tree.
    pub confirm: bool,
}

impl Default for PartialTreeConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            retry_cap: 20,
            confirm: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialTreeStats {
    pub max_depth: usize,
    pub nodes: usize,
    pub retries: usize,
    pub fallbacks: usize,
    /// Recorded cuts discarded by confirmation.
    pub rejected: usize,
    pub flows: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTreeRun {
    pub tree: PartialTree,
    pub stats: PartialTreeStats,
}

struct Ctx<'o> {
    k: u64,
    cfg: PartialTreeConfig,
    oracle: &'o mut dyn SscOracle,
    stats: PartialTreeStats,
}

/// Builds a partial tree of `g` capturing every mincut of value at most `k`
/// that separates two vertices of `u`, and no mincut above `k`.
pub fn partial_tree(
    g: &CapGraph,
    u: &[usize],
    k: u64,
    oracle: &mut dyn SscOracle,
    cfg: &PartialTreeConfig,
) -> Result<PartialTreeRun> {
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&v) = u.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    let start = flow_calls();
    let mut ctx = Ctx {
        k,
        cfg: *cfg,
        oracle,
        stats: PartialTreeStats::default(),
    };
    let origin: Vec<Option<usize>> = (0..g.n()).map(Some).collect();
    let tree = solve(&mut ctx, g, &origin, &u, cfg.seed, 0)?;
    ctx.stats.flows = flow_calls() - start;
    Ok(PartialTreeRun {
        tree,
        stats: ctx.stats,
    })
}

fn solve(
    ctx: &mut Ctx<'_>,
    g: &CapGraph,
    origin: &[Option<usize>],
    u: &[usize],
    seed: u64,
    depth: usize,
) -> Result<PartialTree> {
    ctx.stats.nodes += 1;
    ctx.stats.max_depth = ctx.stats.max_depth.max(depth);
    if u.len() == 1 {
        return Ok(PartialTree::trivial(g.n(), u[0]));
    }
    let (lambda, witness) = steiner_with_witness(g, u)?;
    if lambda.exceeds(ctx.k) {
        return Ok(PartialTree::trivial(g.n(), u[0]));
    }

    let mut chosen = None;
    for attempt in 0..ctx.cfg.retry_cap {
        let mut rng = rng::stream(seed, &[attempt as u64]);
        let s = u[rng.gen_range(0..u.len())];
        let step = partial_tree_step(g, s, u, ctx.k, &mut *ctx.oracle, origin, &mut rng)?;
        let mut cuts = step.cuts;
        if ctx.cfg.confirm {
            let mut kept = Vec::with_capacity(cuts.len());
            for (v, cut) in cuts {
                let f = maxflow::max_flow_value(g, s, v)?;
                if f == cut.value && f <= ctx.k {
                    kept.push((v, cut));
                } else {
                    ctx.stats.rejected += 1;
                    if let (Some(rs), Some(rv)) = (origin[s], origin[v]) {
                        ctx.oracle.observe(rs, rv, f.min(ctx.k));
                    }
                }
            }
            cuts = kept;
        }
        if !cuts.is_empty() {
            chosen = Some(cuts);
            break;
        }
        ctx.stats.retries += 1;
    }
    let cuts = match chosen {
        Some(c) => c,
        None => {
            // Classical split between a pair realising the Steiner value.
            ctx.stats.fallbacks += 1;
            let (u0, w) = witness.expect("two or more terminals");
            vec![(w, maxflow::st_mincut_minimal(g, w, u0)?)]
        }
    };

    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (j, (_, cut)) in cuts.iter().enumerate() {
        for &v in &cut.side {
            owner[v] = j;
        }
    }
    let mut in_u = vec![false; n];
    for &v in u {
        in_u[v] = true;
    }

    let mut subtrees = Vec::with_capacity(cuts.len());
    for (j, (_, cut)) in cuts.iter().enumerate() {
        let side = &cut.side;
        let mut local = vec![side.len(); n];
        for (i, &v) in side.iter().enumerate() {
            local[v] = i;
        }
        let gv = contract(g, &VertexGrouping::new(local.clone())?)?;
        let mut child_origin: Vec<Option<usize>> = side.iter().map(|&v| origin[v]).collect();
        child_origin.push(None);
        let uv: Vec<usize> = side
            .iter()
            .filter(|&&v| in_u[v])
            .map(|&v| local[v])
            .collect();
        let tv = solve(
            ctx,
            &gv,
            &child_origin,
            &uv,
            rng::derive_seed(seed, &[1, j as u64]),
            depth + 1,
        )?;
        let mut to_parent: Vec<Option<usize>> = side.iter().map(|&v| Some(v)).collect();
        to_parent.push(None);
        subtrees.push((tv, to_parent, side.len()));
    }

    let rest: Vec<usize> = (0..n).filter(|&v| owner[v] == usize::MAX).collect();
    let mut group = vec![0; n];
    for (i, &v) in rest.iter().enumerate() {
        group[v] = i;
    }
    for v in 0..n {
        if owner[v] != usize::MAX {
            group[v] = rest.len() + owner[v];
        }
    }
    let large = contract(g, &VertexGrouping::new(group.clone())?)?;
    let mut large_origin: Vec<Option<usize>> = rest.iter().map(|&v| origin[v]).collect();
    large_origin.extend(std::iter::repeat_n(None, cuts.len()));
    let u_large: Vec<usize> = rest
        .iter()
        .filter(|&&v| in_u[v])
        .map(|&v| group[v])
        .collect();
    let t_large = solve(
        ctx,
        &large,
        &large_origin,
        &u_large,
        rng::derive_seed(seed, &[2]),
        depth + 1,
    )?;
    let mut large_to_parent: Vec<Option<usize>> = rest.iter().map(|&v| Some(v)).collect();
    large_to_parent.extend(std::iter::repeat_n(None, cuts.len()));

    let pieces: Vec<CombinePiece<'_>> = subtrees
        .iter()
        .zip(&cuts)
        .enumerate()
        .map(|(j, ((tree, to_parent, anchor), (_, cut)))| CombinePiece {
            tree,
            to_parent,
            anchor: *anchor,
            large_anchor: rest.len() + j,
            weight: cut.value,
        })
        .collect();
    combine(n, &t_large, &large_to_parent, &pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{barbell, complete, path, star};
    use crate::graph::CapacityGraph;

    fn run(g: &CapGraph, u: &[usize], k: u64) -> PartialTree {
        let mut oracle = BruteForceOracle::new(k);
        partial_tree(g, u, k, &mut oracle, &PartialTreeConfig::default())
            .unwrap()
            .tree
    }

    #[test]
    fn steiner_examples() {
        let b = barbell(3).to_cap_graph();
        assert_eq!(
            steiner_connectivity(&b, &[0, 5]),
            Ok(Connectivity::Finite(1))
        );
        let k4 = complete(4).to_cap_graph();
        assert_eq!(
            steiner_connectivity(&k4, &[0, 1, 2, 3]),
            Ok(Connectivity::Finite(3))
        );
        assert_eq!(steiner_connectivity(&k4, &[2]), Ok(Connectivity::Infinite));
        assert_eq!(steiner_connectivity(&k4, &[]), Err(Error::EmptySet));
    }

    #[test]
    fn step_on_star() {
        let g = star(3).to_cap_graph();
        let origin: Vec<_> = (0..4).map(Some).collect();
        let mut rng = rng::stream(1, &[]);
        let mut oracle = BruteForceOracle::new(1);
        let step =
            partial_tree_step(&g, 0, &[0, 1, 2, 3], 1, &mut oracle, &origin, &mut rng).unwrap();
        assert_eq!(step.level, Some(0));
        assert_eq!(step.d, vec![1, 2, 3]);
        for (v, cut) in &step.cuts {
            assert_eq!((&cut.side, cut.value), (&vec![*v], 1));
        }
    }

    #[test]
    fn step_degenerate_and_barbell() {
        let g = barbell(3).to_cap_graph();
        let origin: Vec<_> = (0..6).map(Some).collect();
        let mut rng = rng::stream(1, &[]);
        let mut oracle = BruteForceOracle::new(2);
        let step = partial_tree_step(&g, 0, &[0], 2, &mut oracle, &origin, &mut rng).unwrap();
        assert!(step.d.is_empty() && step.cuts.is_empty());
        let step = partial_tree_step(&g, 0, &[0, 5], 2, &mut oracle, &origin, &mut rng).unwrap();
        assert_eq!(step.d, vec![5]);
        assert_eq!(step.cuts[0].1.side, vec![3, 4, 5]);
        assert_eq!(step.cuts[0].1.value, 1);
        assert_eq!(
            partial_tree_step(&g, 1, &[0, 5], 2, &mut oracle, &origin, &mut rng),
            Err(Error::SourceNotInSet(1))
        );
    }

    #[test]
    fn barbell_k1() {
        let t = run(&barbell(3).to_cap_graph(), &[0, 1, 2, 3, 4, 5], 1);
        assert_eq!(t.terminals().len(), 2);
        assert_eq!(t.edges().len(), 1);
        assert_eq!(t.edges()[0].2, 1);
        let a = t.terminal_of(0);
        assert!([1, 2].iter().all(|&v| t.terminal_of(v) == a));
        assert!([3, 4, 5].iter().all(|&v| t.terminal_of(v) != a));
    }

    #[test]
    fn k4_above_threshold_is_trivial() {
        let t = run(&complete(4).to_cap_graph(), &[0, 1, 2, 3], 2);
        assert_eq!(t.terminals().len(), 1);
        assert!(t.edges().is_empty());
    }

    #[test]
    fn path_fully_split() {
        let t = run(&path(3).to_cap_graph(), &[0, 1, 2], 1);
        assert_eq!(t.terminals(), &[0, 1, 2]);
        assert_eq!(t.edges(), &[(0, 1, 1), (1, 2, 1)]);
    }

    #[test]
    fn oracle_examples() {
        let g = path(3).to_cap_graph();
        let origin: Vec<_> = (0..3).map(Some).collect();
        let q = |claims: &[(usize, u64)], k: u64| {
            BruteForceOracle::new(k)
                .verify(&SscQuery {
                    graph: &g,
                    origin: &origin,
                    terminals: &[0, 1, 2],
                    source: 0,
                    claims,
                })
                .unwrap()
        };
        assert_eq!(q(&[(1, 1), (2, 1)], 5), vec![true, true]);
        assert_eq!(q(&[(1, 2), (2, 1)], 5), vec![false, true]);
        assert_eq!(q(&[(1, 0), (2, 0)], 0), vec![true, true]);
    }

    #[test]
    fn combine_examples() {
        // large: {0, y}; piece: {1, x}; parent graph is a single edge 0-1
        let large = PartialTree::trivial(2, 0);
        let piece = PartialTree::trivial(2, 0);
        let joined = combine(
            2,
            &large,
            &[Some(0), None],
            &[CombinePiece {
                tree: &piece,
                to_parent: &[Some(1), None],
                anchor: 1,
                large_anchor: 1,
                weight: 1,
            }],
        )
        .unwrap();
        assert_eq!(joined.edges(), &[(0, 1, 1)]);
        assert_eq!(joined.part_of(), &[0, 1]);

        let alone = combine(
            3,
            &PartialTree::trivial(3, 2),
            &[Some(0), Some(1), Some(2)],
            &[],
        )
        .unwrap();
        assert_eq!(alone, PartialTree::trivial(3, 2));

        let bad = combine(
            2,
            &large,
            &[Some(0), None],
            &[CombinePiece {
                tree: &piece,
                to_parent: &[Some(1), None],
                anchor: 7,
                large_anchor: 1,
                weight: 1,
            }],
        );
        assert!(matches!(bad, Err(Error::MissingAnchor(_))));
    }

    #[test]
    fn split_and_refinement() {
        let g = path(4).to_cap_graph();
        let mut t = PartialTree::trivial(4, 0);
        assert_eq!(
            split_part(&g, &mut t, 0, 2, None),
            Ok(SplitOutcome::Split(1))
        );
        assert_eq!(t.part_of(), &[0, 0, 2, 2]);
        let coarse = t.clone();
        assert_eq!(
            split_part(&g, &mut t, 2, 3, Some(0)),
            Ok(SplitOutcome::Exceeded(1))
        );
        assert_eq!(t, coarse);
        assert_eq!(
            split_part(&g, &mut t, 2, 3, Some(1)),
            Ok(SplitOutcome::Split(1))
        );
        assert!(t.is_refinement_of(&coarse));
        assert!(!coarse.is_refinement_of(&t));
        let mut swapped = coarse.clone();
        swapped.replace_terminal(0, 1);
        assert_eq!(swapped.part_of(), &[1, 1, 2, 2]);
        assert_eq!(swapped.edges(), &[(1, 2, 1)]);
    }
}
