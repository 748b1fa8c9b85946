//! Deterministic graph families used as the test and benchmark corpus.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Gnp {
        n: usize,
        p: f64,
    },
    /// Two `size`-cliques joined by one bridge edge.
    Barbell {
        size: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    /// Random graph where every vertex aims for `degree` neighbours.
    RegularIsh {
        n: usize,
        degree: usize,
    },
    /// `clusters` blocks of `size` vertices; edge probability `p_in` inside a
    /// block and `p_out` across blocks.
    PlantedClusters {
        clusters: usize,
        size: usize,
        p_in: f64,
        p_out: f64,
    },
}

/// Family names as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Gnp,
    Barbell,
    Grid,
    RegularIsh,
    PlantedClusters,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gnp" => Self::Gnp,
            "barbell" => Self::Barbell,
            "grid" => Self::Grid,
            "regular-ish" => Self::RegularIsh,
            "planted-clusters" => Self::PlantedClusters,
            other => return Err(Error::InvalidParams(format!("unknown family {other:?}"))),
        })
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gnp => "gnp",
            Self::Barbell => "barbell",
            Self::Grid => "grid",
            Self::RegularIsh => "regular-ish",
            Self::PlantedClusters => "planted-clusters",
        })
    }
}

impl FamilyKind {
    /// A family instance with roughly `n` vertices and default shape
    /// parameters, as used by the benchmark sweep.
    pub fn sized(self, n: usize) -> Family {
        match self {
            Self::Gnp => Family::Gnp { n, p: 0.5 },
            Self::Barbell => Family::Barbell {
                size: (n / 2).max(1),
            },
            Self::Grid => {
                let rows = ((n as f64).sqrt().floor() as usize).max(1);
                Family::Grid {
                    rows,
                    cols: (n / rows).max(1),
                }
            }
            Self::RegularIsh => Family::RegularIsh {
                n,
                degree: 4.min(n.saturating_sub(1)),
            },
            Self::PlantedClusters => Family::PlantedClusters {
                clusters: 4,
                size: (n / 4).max(1),
                p_in: 0.8,
                p_out: 0.05,
            },
        }
    }
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Gnp { .. } => FamilyKind::Gnp,
            Family::Barbell { .. } => FamilyKind::Barbell,
            Family::Grid { .. } => FamilyKind::Grid,
            Family::RegularIsh { .. } => FamilyKind::RegularIsh,
            Family::PlantedClusters { .. } => FamilyKind::PlantedClusters,
        }
    }
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "probability {p} outside [0, 1]"
        )))
    }
}

/// Generates a graph; a pure function of `(family, seed)`.
pub fn generate(family: &Family, seed: u64) -> Result<SimpleGraph> {
    let mut rng = rng::stream(seed, &[0x0067_656e]);
    match *family {
        Family::Gnp { n, p } => {
            check_prob(p)?;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            SimpleGraph::new(n, edges)
        }
        Family::Barbell { size } => {
            if size == 0 {
                return Err(Error::InvalidParams("barbell size must be positive".into()));
            }
            Ok(barbell(size))
        }
        Family::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(Error::InvalidParams(
                    "grid dimensions must be positive".into(),
                ));
            }
            Ok(grid(rows, cols))
        }
        Family::RegularIsh { n, degree } => {
            if n > 0 && degree >= n {
                return Err(Error::InvalidParams(format!(
                    "degree {degree} impossible on {n} vertices"
                )));
            }
            let mut stubs: Vec<usize> = (0..n)
                .flat_map(|v| std::iter::repeat_n(v, degree))
                .collect();
            let mut present = std::collections::BTreeSet::new();
            for _attempt in 0..8 {
                stubs.shuffle(&mut rng);
                let mut leftover = Vec::new();
                for pair in stubs.chunks(2) {
                    if let [a, b] = *pair {
                        let key = (a.min(b), a.max(b));
                        if a != b && present.insert(key) {
                            continue;
                        }
                        leftover.extend([a, b]);
                    } else {
                        leftover.extend_from_slice(pair);
                    }
                }
                stubs = leftover;
                if stubs.len() < 2 {
                    break;
                }
            }
            SimpleGraph::new(n, present)
        }
        Family::PlantedClusters {
            clusters,
            size,
            p_in,
            p_out,
        } => {
            check_prob(p_in)?;
            check_prob(p_out)?;
            let n = clusters * size;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    let p = if u / size.max(1) == v / size.max(1) {
                        p_in
                    } else {
                        p_out
                    };
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            SimpleGraph::new(n, edges)
        }
    }
}

pub fn path(n: usize) -> SimpleGraph {
    SimpleGraph::new(n, (1..n).map(|v| (v - 1, v))).expect("path")
}

pub fn cycle(n: usize) -> SimpleGraph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    SimpleGraph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle")
}

pub fn complete(n: usize) -> SimpleGraph {
    SimpleGraph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("complete")
}

/// Star `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> SimpleGraph {
    SimpleGraph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star")
}

/// Cliques on `0..size` and `size..2*size` joined by the edge `(size-1, size)`.
pub fn barbell(size: usize) -> SimpleGraph {
    let mut edges = Vec::new();
    for base in [0, size] {
        for u in 0..size {
            for v in u + 1..size {
                edges.push((base + u, base + v));
            }
        }
    }
    edges.push((size - 1, size));
    SimpleGraph::new(2 * size, edges).expect("barbell")
}

pub fn grid(rows: usize, cols: usize) -> SimpleGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    SimpleGraph::new(rows * cols, edges).expect("grid")
}
