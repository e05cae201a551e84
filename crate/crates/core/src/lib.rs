//! Zero-sum cycles in group-weighted graphs: a brute-force oracle, the
//! constructive directed and undirected solvers, extremal constructions and
//! an experiment harness.

pub mod codec;
pub mod constructive;
pub mod error;
pub mod explorer;
pub mod graph;
pub mod group;
pub mod oracle;
pub mod undirected;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{CycleWitness, PathFamily, PathWitness, WeightedAdjacency, WeightedDigraph, WeightedGraph};
pub use group::{GroupElem, GroupSpec, ResidueSet};
pub use oracle::{Search, SearchBudget};
