//! Discrete and relaxed graph representations with degree and uniqueness
//! metrics.
//!
//! Graphs are fixed-size: `N` node slots with `T` one-hot node types (one of
//! which is a designated "empty" pad type) and an `N x N x B` one-hot
//! adjacency tensor (one edge type designated "no-edge"). [`GraphSample`] is
//! the discrete object; [`RelaxedGraph`] is its probability-simplex
//! counterpart emitted by a generator before discretization.

mod canon;
mod error;
mod graph;
mod metrics;

pub use canon::{canonicalize, CanonicalForm};
pub use error::GraphError;
pub use graph::{discretize, GraphSample, RelaxedGraph};
pub use metrics::{average_node_degree, mean_degree_over_set, percent_unique};
