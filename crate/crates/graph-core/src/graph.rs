use crate::GraphError;

/// A discrete labeled graph over fixed node slots.
///
/// Node features form an `N x T` one-hot matrix and the adjacency an
/// `N x N x B` one-hot tensor; both are stored compactly as type indices.
/// Invariants (checked by [`GraphSample::new`] and
/// [`GraphSample::check_invariants`]):
///
/// * the adjacency is symmetric,
/// * diagonal entries are always "no-edge",
/// * empty (pad) nodes have no incident edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphSample {
    num_nodes: usize,
    num_node_types: usize,
    num_edge_types: usize,
    empty_type: usize,
    no_edge_type: usize,
    /// Per-slot node type index, length `N`.
    node_types: Vec<u8>,
    /// Row-major `N x N` edge type indices.
    edge_types: Vec<u8>,
}

impl GraphSample {
    pub fn new(
        num_nodes: usize,
        num_node_types: usize,
        num_edge_types: usize,
        empty_type: usize,
        no_edge_type: usize,
        node_types: Vec<u8>,
        edge_types: Vec<u8>,
    ) -> Result<Self, GraphError> {
        let g = Self {
            num_nodes,
            num_node_types,
            num_edge_types,
            empty_type,
            no_edge_type,
            node_types,
            edge_types,
        };
        g.check_invariants()?;
        Ok(g)
    }

    /// Builds an edgeless graph of `active` non-empty nodes of type
    /// `node_type`, padded with empty slots.
    pub fn edgeless(
        num_nodes: usize,
        num_node_types: usize,
        num_edge_types: usize,
        empty_type: usize,
        no_edge_type: usize,
        active: usize,
        node_type: u8,
    ) -> Result<Self, GraphError> {
        let node_types = (0..num_nodes)
            .map(|i| if i < active { node_type } else { empty_type as u8 })
            .collect();
        Self::new(
            num_nodes,
            num_node_types,
            num_edge_types,
            empty_type,
            no_edge_type,
            node_types,
            vec![no_edge_type as u8; num_nodes * num_nodes],
        )
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_node_types(&self) -> usize {
        self.num_node_types
    }

    pub fn num_edge_types(&self) -> usize {
        self.num_edge_types
    }

    pub fn empty_type(&self) -> usize {
        self.empty_type
    }

    pub fn no_edge_type(&self) -> usize {
        self.no_edge_type
    }

    pub fn node_type(&self, i: usize) -> usize {
        self.node_types[i] as usize
    }

    pub fn edge_type(&self, i: usize, j: usize) -> usize {
        self.edge_types[i * self.num_nodes + j] as usize
    }

    pub fn is_empty_node(&self, i: usize) -> bool {
        self.node_type(i) == self.empty_type
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge_type(i, j) != self.no_edge_type
    }

    /// Sets the symmetric pair of adjacency entries for `(i, j)`.
    pub fn set_edge(&mut self, i: usize, j: usize, edge_type: u8) {
        self.edge_types[i * self.num_nodes + j] = edge_type;
        self.edge_types[j * self.num_nodes + i] = edge_type;
    }

    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let n = self.num_nodes;
        if n == 0 || self.num_node_types < 2 || self.num_edge_types < 2 {
            return Err(GraphError::Invalid(format!(
                "degenerate dimensions N={} T={} B={}",
                n, self.num_node_types, self.num_edge_types
            )));
        }
        if self.empty_type >= self.num_node_types || self.no_edge_type >= self.num_edge_types {
            return Err(GraphError::Invalid(
                "empty/no-edge index out of range".into(),
            ));
        }
        if self.node_types.len() != n || self.edge_types.len() != n * n {
            return Err(GraphError::Invalid(format!(
                "storage sizes {}/{} do not match N={}",
                self.node_types.len(),
                self.edge_types.len(),
                n
            )));
        }
        for (i, &t) in self.node_types.iter().enumerate() {
            if t as usize >= self.num_node_types {
                return Err(GraphError::Invalid(format!(
                    "node {i} has type {t} out of range"
                )));
            }
        }
        for i in 0..n {
            if self.edge_type(i, i) != self.no_edge_type {
                return Err(GraphError::Invalid(format!("self-loop at node {i}")));
            }
            for j in 0..n {
                let e = self.edge_type(i, j);
                if e >= self.num_edge_types {
                    return Err(GraphError::Invalid(format!(
                        "edge ({i},{j}) has type {e} out of range"
                    )));
                }
                if e != self.edge_type(j, i) {
                    return Err(GraphError::Invalid(format!(
                        "adjacency not symmetric at ({i},{j})"
                    )));
                }
                if e != self.no_edge_type && (self.is_empty_node(i) || self.is_empty_node(j)) {
                    return Err(GraphError::Invalid(format!(
                        "edge ({i},{j}) incident to an empty node"
                    )));
                }
            }
        }
        Ok(())
    }

    /// One-hot `N x T` node feature matrix, row-major.
    pub fn node_features(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.num_nodes * self.num_node_types];
        for (i, &t) in self.node_types.iter().enumerate() {
            out[i * self.num_node_types + t as usize] = 1.0;
        }
        out
    }

    /// One-hot `N x N x B` adjacency tensor, row-major.
    pub fn adjacency(&self) -> Vec<f64> {
        let b = self.num_edge_types;
        let mut out = vec![0.0; self.num_nodes * self.num_nodes * b];
        for (k, &e) in self.edge_types.iter().enumerate() {
            out[k * b + e as usize] = 1.0;
        }
        out
    }

    /// Packed one-hot bytes: node matrix then adjacency tensor, row-major.
    pub fn to_onehot_bytes(&self) -> Vec<u8> {
        let (n, t, b) = (self.num_nodes, self.num_node_types, self.num_edge_types);
        let mut out = vec![0u8; n * t + n * n * b];
        for (i, &ty) in self.node_types.iter().enumerate() {
            out[i * t + ty as usize] = 1;
        }
        let base = n * t;
        for (k, &e) in self.edge_types.iter().enumerate() {
            out[base + k * b + e as usize] = 1;
        }
        out
    }

    /// Inverse of [`GraphSample::to_onehot_bytes`]; validates all invariants.
    pub fn from_onehot_bytes(
        num_nodes: usize,
        num_node_types: usize,
        num_edge_types: usize,
        empty_type: usize,
        no_edge_type: usize,
        bytes: &[u8],
    ) -> Result<Self, GraphError> {
        let (n, t, b) = (num_nodes, num_node_types, num_edge_types);
        if bytes.len() != n * t + n * n * b {
            return Err(GraphError::Invalid(format!(
                "one-hot byte length {} does not match N={n} T={t} B={b}",
                bytes.len()
            )));
        }
        let onehot_index = |fiber: &[u8], what: &str| -> Result<u8, GraphError> {
            let mut idx = None;
            for (k, &v) in fiber.iter().enumerate() {
                match v {
                    0 => {}
                    1 if idx.is_none() => idx = Some(k as u8),
                    _ => return Err(GraphError::Invalid(format!("{what} is not one-hot"))),
                }
            }
            idx.ok_or_else(|| GraphError::Invalid(format!("{what} is all-zero")))
        };
        let mut node_types = Vec::with_capacity(n);
        for i in 0..n {
            node_types.push(onehot_index(&bytes[i * t..(i + 1) * t], "node row")?);
        }
        let base = n * t;
        let mut edge_types = Vec::with_capacity(n * n);
        for k in 0..n * n {
            edge_types.push(onehot_index(
                &bytes[base + k * b..base + (k + 1) * b],
                "adjacency fiber",
            )?);
        }
        Self::new(n, t, b, empty_type, no_edge_type, node_types, edge_types)
    }

    /// Applies a node permutation: node `i` of the result is node `perm[i]`
    /// of `self`.
    pub fn permute(&self, perm: &[usize]) -> GraphSample {
        assert_eq!(perm.len(), self.num_nodes);
        let n = self.num_nodes;
        let node_types = perm.iter().map(|&p| self.node_types[p]).collect();
        let mut edge_types = vec![self.no_edge_type as u8; n * n];
        for i in 0..n {
            for j in 0..n {
                edge_types[i * n + j] = self.edge_types[perm[i] * n + perm[j]];
            }
        }
        GraphSample {
            node_types,
            edge_types,
            ..self.clone()
        }
    }
}

/// The probability-simplex relaxation of a [`GraphSample`]: real-valued node
/// rows and adjacency fibers that each sum to one.
#[derive(Debug, Clone)]
pub struct RelaxedGraph {
    pub num_nodes: usize,
    pub num_node_types: usize,
    pub num_edge_types: usize,
    pub empty_type: usize,
    pub no_edge_type: usize,
    /// Row-major `N x T`.
    pub node_probs: Vec<f64>,
    /// Row-major `N x N x B`.
    pub adj_probs: Vec<f64>,
}

impl RelaxedGraph {
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let (n, t, b) = (self.num_nodes, self.num_node_types, self.num_edge_types);
        if self.node_probs.len() != n * t || self.adj_probs.len() != n * n * b {
            return Err(GraphError::Invalid("relaxed graph storage size".into()));
        }
        let simplex = |fiber: &[f64], what: &str| -> Result<(), GraphError> {
            let mut sum = 0.0;
            for &v in fiber {
                if !(0.0..=1.0).contains(&v) {
                    return Err(GraphError::Invalid(format!("{what} entry {v} not in [0,1]")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > 1e-6 {
                return Err(GraphError::Invalid(format!("{what} sums to {sum}")));
            }
            Ok(())
        };
        for i in 0..n {
            simplex(&self.node_probs[i * t..(i + 1) * t], "node row")?;
        }
        for i in 0..n {
            for j in 0..n {
                let f = &self.adj_probs[(i * n + j) * b..(i * n + j + 1) * b];
                simplex(f, "adjacency fiber")?;
                let g = &self.adj_probs[(j * n + i) * b..(j * n + i + 1) * b];
                if f != g {
                    return Err(GraphError::Invalid(format!(
                        "adjacency not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn argmax(fiber: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in fiber.iter().enumerate().skip(1) {
        if v > fiber[best] {
            best = k;
        }
    }
    best
}

/// Collapses a relaxed graph to a discrete [`GraphSample`] by per-row and
/// per-fiber argmax (ties break toward the lowest index). Only the upper
/// triangle is argmaxed and then mirrored, the diagonal is forced to
/// "no-edge", and edges incident to empty nodes are cleared.
pub fn discretize(rg: &RelaxedGraph) -> GraphSample {
    let (n, t, b) = (rg.num_nodes, rg.num_node_types, rg.num_edge_types);
    let node_types: Vec<u8> = (0..n)
        .map(|i| argmax(&rg.node_probs[i * t..(i + 1) * t]) as u8)
        .collect();
    let mut edge_types = vec![rg.no_edge_type as u8; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let empty = node_types[i] as usize == rg.empty_type
                || node_types[j] as usize == rg.empty_type;
            let e = if empty {
                rg.no_edge_type as u8
            } else {
                argmax(&rg.adj_probs[(i * n + j) * b..(i * n + j + 1) * b]) as u8
            };
            edge_types[i * n + j] = e;
            edge_types[j * n + i] = e;
        }
    }
    GraphSample {
        num_nodes: n,
        num_node_types: t,
        num_edge_types: b,
        empty_type: rg.empty_type,
        no_edge_type: rg.no_edge_type,
        node_types,
        edge_types,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 4 nodes fully connected by single edges, vocab T=2 (type 0 + empty 1),
    /// B=2 (no-edge 0 + single 1).
    pub(crate) fn k4() -> GraphSample {
        let mut g = GraphSample::edgeless(4, 2, 2, 1, 0, 4, 0).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                g.set_edge(i, j, 1);
            }
        }
        g.check_invariants().unwrap();
        g
    }

    #[test]
    fn invariant_checker_rejects_self_loop() {
        let mut g = k4();
        g.edge_types[0] = 1;
        assert!(g.check_invariants().is_err());
    }

    #[test]
    fn invariant_checker_rejects_asymmetry() {
        let mut g = k4();
        g.edge_types[1] = 0; // (0,1) cleared, (1,0) still set
        assert!(g.check_invariants().is_err());
    }

    #[test]
    fn invariant_checker_rejects_edge_to_empty() {
        let mut g = k4();
        g.node_types[3] = 1; // empty, but edges to it remain
        assert!(g.check_invariants().is_err());
    }

    #[test]
    fn onehot_round_trip() {
        let g = k4();
        let bytes = g.to_onehot_bytes();
        let back = GraphSample::from_onehot_bytes(4, 2, 2, 1, 0, &bytes).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn discretize_of_onehot_is_identity() {
        let g = k4();
        let rg = RelaxedGraph {
            num_nodes: 4,
            num_node_types: 2,
            num_edge_types: 2,
            empty_type: 1,
            no_edge_type: 0,
            node_probs: g.node_features(),
            adj_probs: g.adjacency(),
        };
        rg.check_invariants().unwrap();
        assert_eq!(discretize(&rg), g);
    }

    #[test]
    fn discretize_tie_breaks_to_lowest_index() {
        // Single fiber (0.5, 0.5): argmax must pick index 0 (no-edge here).
        let rg = RelaxedGraph {
            num_nodes: 2,
            num_node_types: 2,
            num_edge_types: 2,
            empty_type: 1,
            no_edge_type: 0,
            node_probs: vec![1.0, 0.0, 1.0, 0.0],
            adj_probs: vec![1.0, 0.0, 0.5, 0.5, 0.5, 0.5, 1.0, 0.0],
        };
        let g = discretize(&rg);
        assert_eq!(g.edge_type(0, 1), 0);
        // And a (0.5, 0.5) node row picks type 0.
        let rg2 = RelaxedGraph {
            node_probs: vec![0.5, 0.5, 1.0, 0.0],
            ..rg
        };
        assert_eq!(discretize(&rg2).node_type(0), 0);
    }
}
