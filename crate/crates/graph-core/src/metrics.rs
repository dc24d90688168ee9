use std::collections::HashMap;

use crate::{canonicalize, GraphError, GraphSample};

/// Mean number of connected neighbors per non-empty node.
///
/// Edge multiplicity does not weight the count: any non-"no-edge" entry
/// contributes exactly 1 to each endpoint's degree. A graph with zero
/// non-empty nodes has degree 0.0 by convention.
pub fn average_node_degree(g: &GraphSample) -> f64 {
    let n = g.num_nodes();
    let active = (0..n).filter(|&i| !g.is_empty_node(i)).count();
    if active == 0 {
        return 0.0;
    }
    let mut edges = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if g.has_edge(i, j) {
                edges += 1;
            }
        }
    }
    (2 * edges) as f64 / active as f64
}

/// Arithmetic mean of [`average_node_degree`] over a set.
pub fn mean_degree_over_set(gs: &[GraphSample]) -> Result<f64, GraphError> {
    if gs.is_empty() {
        return Err(GraphError::EmptySet("mean_degree_over_set"));
    }
    Ok(gs.iter().map(average_node_degree).sum::<f64>() / gs.len() as f64)
}

/// Share (in percent) of distinct labeled-graph isomorphism classes in a set.
///
/// All graphs count; there is no validity filter. Byte-identical graphs are
/// deduplicated before canonicalization, so heavily collapsed sample sets are
/// cheap to score.
pub fn percent_unique(gs: &[GraphSample]) -> Result<f64, GraphError> {
    if gs.is_empty() {
        return Err(GraphError::EmptySet("percent_unique"));
    }
    let mut canon_cache: HashMap<&GraphSample, Vec<u8>> = HashMap::new();
    for g in gs {
        canon_cache
            .entry(g)
            .or_insert_with(|| canonicalize(g).into_bytes());
    }
    let mut distinct: HashMap<&[u8], ()> = HashMap::new();
    for form in canon_cache.values() {
        distinct.insert(form.as_slice(), ());
    }
    Ok(100.0 * distinct.len() as f64 / gs.len() as f64)
}
