//! Capped single-source mincut values inside a well-linked terminal set, by
//! repeated sampling plus isolating cuts.

use crate::error::{Error, Result};
use crate::graph::{CapGraph, Cut};
use crate::isolating::isolating_cuts;
use crate::maxflow::flow_calls;
use crate::rng;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub rate: f64,
    pub rounds: usize,
    pub c: f64,
    pub seed: u64,
}

impl SamplerConfig {
    /// `rate = phi / 2` and `rounds = ceil(c ln n / phi)`, at least one round.
    pub fn new(phi: f64, n: usize, c: f64, seed: u64) -> Result<Self> {
        check_phi(phi)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidSampler(format!("c = {c} must be positive")));
        }
        let rounds = (c * (n.max(2) as f64).ln() / phi).ceil().max(1.0) as usize;
        let cfg = Self {
            rate: phi / 2.0,
            rounds,
            c,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate <= 0.5) {
            return Err(Error::InvalidSampler(format!(
                "rate {} outside (0, 1/2]",
                self.rate
            )));
        }
        if self.rounds == 0 {
            return Err(Error::InvalidSampler("rounds must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidPhi(phi))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SscStats {
    pub rounds: usize,
    pub isolating_calls: usize,
    pub maxflow_calls: u64,
    /// Largest `|S ∪ {p}|` handed to isolating cuts.
    pub max_terminals: usize,
}

/// `val[x]` for every `x` in `X \ {p}`, each the value of some `(p, x)`-cut
/// and at most `2d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValTable {
    pub source: usize,
    pub cap: u64,
    values: BTreeMap<usize, u64>,
    witnesses: BTreeMap<usize, Cut>,
    pub stats: SscStats,
}

impl ValTable {
    pub fn get(&self, x: usize) -> Option<u64> {
        self.values.get(&x).copied()
    }

    /// `(x, val[x])` in ascending `x`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.values.iter().map(|(&x, &v)| (x, v))
    }

    /// The cut whose value `val[x]` was last lowered to; `None` while `val[x]`
    /// is still the cap.
    pub fn witness(&self, x: usize) -> Option<&Cut> {
        self.witnesses.get(&x)
    }

    /// Overwrites an entry with a value known to be exact.
    pub(crate) fn set(&mut self, x: usize, value: u64) {
        if let Some(v) = self.values.get_mut(&x) {
            *v = value.min(self.cap);
            self.witnesses.remove(&x);
        }
    }
}

/// Computes `min(mincut(p, x), 2d)` for all `x` in `X \ {p}`, correct with
/// high probability when `X` is `(d, phi)`-well-linked; every entry is an
/// upper bound regardless.
pub fn single_source_mincut(
    g: &CapGraph,
    x: &[usize],
    d: u64,
    phi: f64,
    p: usize,
    cfg: &SamplerConfig,
) -> Result<ValTable> {
    check_phi(phi)?;
    cfg.validate()?;
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if let Some(&v) = xs.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewTerminals(xs.len()));
    }
    if xs.binary_search(&p).is_err() {
        return Err(Error::SourceNotInSet(p));
    }
    let others: Vec<usize> = xs.iter().copied().filter(|&v| v != p).collect();
    let cap = 2 * d;
    let mut table = ValTable {
        source: p,
        cap,
        values: others.iter().map(|&v| (v, cap)).collect(),
        witnesses: BTreeMap::new(),
        stats: SscStats {
            rounds: cfg.rounds,
            ..SscStats::default()
        },
    };
    let start = flow_calls();
    for round in 0..cfg.rounds {
        let mut rng = rng::stream(cfg.seed, &[round as u64]);
        let sample: Vec<usize> = others
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(cfg.rate))
            .collect();
        if sample.is_empty() {
            continue;
        }
        let mut terminals = sample.clone();
        terminals.push(p);
        table.stats.isolating_calls += 1;
        table.stats.max_terminals = table.stats.max_terminals.max(terminals.len());
        let iso = isolating_cuts(g, &terminals)?;
        let cp = iso.get(p).expect("source is a terminal");
        for &v in &sample {
            let cv = iso.get(v).expect("sampled vertex is a terminal");
            if !cv.contains(p) && cv.value < table.values[&v] {
                table.values.insert(v, cv.value);
                table.witnesses.insert(v, cv.clone());
            }
            if !cp.contains(v) && cp.value < table.values[&v] {
                table.values.insert(v, cp.value);
                table.witnesses.insert(v, cp.clone());
            }
        }
    }
    table.stats.maxflow_calls = flow_calls() - start;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, star};
    use crate::graph::CapacityGraph;

    #[test]
    fn config() {
        let cfg = SamplerConfig::new(0.5, 10, 4.0, 1).unwrap();
        assert_eq!(cfg.rate, 0.25);
        assert_eq!(cfg.rounds, (4.0 * 10f64.ln() / 0.5).ceil() as usize);
        assert!(SamplerConfig::new(0.0, 10, 4.0, 1).is_err());
        assert!(SamplerConfig::new(1.5, 10, 4.0, 1).is_err());
    }

    #[test]
    fn complete_graph() {
        let g = complete(4).to_cap_graph();
        let cfg = SamplerConfig::new(1.0, 4, 4.0, 7).unwrap();
        let val = single_source_mincut(&g, &[0, 1, 2, 3], 3, 1.0, 0, &cfg).unwrap();
        assert_eq!(val.iter().collect::<Vec<_>>(), vec![(1, 3), (2, 3), (3, 3)]);
        assert!(val.stats.isolating_calls <= cfg.rounds);
    }

    #[test]
    fn cycle_graph() {
        let g = cycle(4).to_cap_graph();
        let cfg = SamplerConfig::new(0.5, 4, 4.0, 3).unwrap();
        let val = single_source_mincut(&g, &[0, 1, 2, 3], 2, 0.5, 0, &cfg).unwrap();
        assert_eq!(val.iter().collect::<Vec<_>>(), vec![(1, 2), (2, 2), (3, 2)]);
        assert_eq!(val.witness(1).unwrap().value, 2);
    }

    #[test]
    fn cap_is_never_beaten_by_large_cuts() {
        // every mincut is 3 > 2d = 2
        let g = complete(4).to_cap_graph();
        let cfg = SamplerConfig::new(1.0, 4, 4.0, 0).unwrap();
        let val = single_source_mincut(&g, &[0, 1, 2, 3], 1, 1.0, 2, &cfg).unwrap();
        assert!(val.iter().all(|(_, v)| v == 2));
        assert!(val.witness(0).is_none());
    }

    #[test]
    fn errors() {
        let g = star(3).to_cap_graph();
        let cfg = SamplerConfig::new(1.0, 4, 4.0, 0).unwrap();
        assert_eq!(
            single_source_mincut(&g, &[1, 2], 1, 1.0, 0, &cfg),
            Err(Error::SourceNotInSet(0))
        );
        assert_eq!(
            single_source_mincut(&g, &[1], 1, 1.0, 1, &cfg),
            Err(Error::TooFewTerminals(1))
        );
    }
}
