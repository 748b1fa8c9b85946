//! Exact Gomory-Hu (cut-equivalent) trees for unweighted simple graphs.
//!
//! The fast pipeline bootstraps a partial tree that captures every small
//! mincut, then repeatedly doubles a connectivity threshold `d`: it sparsifies
//! the input to a `3d`-connectivity certificate, partitions the high-degree
//! vertices into well-linked clusters, and refines the partial tree one
//! cluster at a time using isolating cuts and capped single-source mincut
//! values. A classical `n - 1` max-flow construction and brute-force
//! verifiers are included so every stage can be checked independently.

pub mod bruteforce;
pub mod certificate;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod isolating;
pub mod maxflow;
pub mod partial_tree;
pub mod pipeline;
pub mod refine;
pub mod rng;
pub mod sstmincut;
pub mod tree;
pub mod wellinked;

mod unionfind;

pub use error::{Error, Result};
pub use graph::{CapGraph, CapacityGraph, Cut, SimpleGraph, VertexGrouping};
pub use partial_tree::PartialTree;
pub use tree::GhTree;
