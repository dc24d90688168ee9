use crate::GraphSample;

/// Canonical byte string identifying a labeled-graph isomorphism class.
///
/// Two graphs over the same vocabulary have equal forms exactly when some
/// node permutation maps one onto the other preserving node and edge types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Computes the canonical form of `g` by color refinement plus backtracking.
///
/// Nodes start colored by type, colors are refined by the multiset of
/// (edge type, neighbor color) pairs until stable, and remaining ties are
/// broken by individualizing each member of the smallest non-singleton cell
/// in turn, keeping the lexicographically smallest encoding. Branches rooted
/// at two cell members with identical adjacency rows are interchangeable and
/// only the first is explored.
pub fn canonicalize(g: &GraphSample) -> CanonicalForm {
    let n = g.num_nodes();
    let initial: Vec<u32> = (0..n).map(|i| g.node_type(i) as u32).collect();
    let colors = refine(g, &initial);
    let mut best: Option<Vec<u8>> = None;
    search(g, colors, &mut best);
    CanonicalForm {
        bytes: best.expect("at least one labeling"),
    }
}

/// Stable 1-WL refinement with edge colors. Color values are ranks derived
/// only from (previous color, sorted neighbor signature), never from node
/// indices, so refinement commutes with graph isomorphism.
fn refine(g: &GraphSample, colors: &[u32]) -> Vec<u32> {
    let n = g.num_nodes();
    let mut colors = colors.to_vec();
    loop {
        let mut signatures: Vec<(u32, Vec<(u32, u32)>)> = Vec::with_capacity(n);
        for i in 0..n {
            let mut neigh: Vec<(u32, u32)> = (0..n)
                .filter(|&j| j != i && g.has_edge(i, j))
                .map(|j| (g.edge_type(i, j) as u32, colors[j]))
                .collect();
            neigh.sort_unstable();
            signatures.push((colors[i], neigh));
        }
        let mut distinct: Vec<&(u32, Vec<(u32, u32)>)> = signatures.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let next: Vec<u32> = signatures
            .iter()
            .map(|s| distinct.binary_search(&s).unwrap() as u32)
            .collect();
        let stable = count_colors(&next) == count_colors(&colors);
        colors = next;
        if stable {
            return colors;
        }
    }
}

fn count_colors(colors: &[u32]) -> usize {
    let mut seen = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn search(g: &GraphSample, colors: Vec<u32>, best: &mut Option<Vec<u8>>) {
    let n = g.num_nodes();
    // Cells grouped by color value.
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut sorted: Vec<(u32, usize)> = colors.iter().copied().zip(0..n).collect();
    sorted.sort_unstable();
    for (k, &(c, i)) in sorted.iter().enumerate() {
        if k == 0 || sorted[k - 1].0 != c {
            cells.push(Vec::new());
        }
        cells.last_mut().unwrap().push(i);
    }

    if cells.len() == n {
        // Discrete: position p holds the node of color rank p.
        let perm: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let enc = encode(g, &perm);
        if best.as_ref().map_or(true, |b| enc < *b) {
            *best = Some(enc);
        }
        return;
    }

    // Smallest non-singleton cell, ties toward the lowest color.
    let target = cells
        .iter()
        .filter(|c| c.len() > 1)
        .min_by_key(|c| c.len())
        .expect("non-discrete partition has a splittable cell")
        .clone();

    let mut tried: Vec<usize> = Vec::new();
    for &v in &target {
        if tried.iter().any(|&w| interchangeable(g, v, w)) {
            continue;
        }
        tried.push(v);
        // Individualize v: it becomes its own cell ahead of its old peers.
        let mut split: Vec<u32> = colors.iter().map(|&c| c * 2 + 1).collect();
        split[v] = colors[v] * 2;
        search(g, refine(g, &split), best);
    }
}

/// True when swapping `v` and `w` is an automorphism: equal types and
/// identical adjacency rows off `{v, w}`.
fn interchangeable(g: &GraphSample, v: usize, w: usize) -> bool {
    if g.node_type(v) != g.node_type(w) {
        return false;
    }
    (0..g.num_nodes())
        .filter(|&u| u != v && u != w)
        .all(|u| g.edge_type(v, u) == g.edge_type(w, u))
}

/// Byte encoding of `g` relabeled by `perm`: dimensions, node types in
/// order, then upper-triangle edge types row-major.
fn encode(g: &GraphSample, perm: &[usize]) -> Vec<u8> {
    let n = g.num_nodes();
    let mut out = Vec::with_capacity(3 + n + n * (n - 1) / 2);
    out.push(n as u8);
    out.push(g.num_node_types() as u8);
    out.push(g.num_edge_types() as u8);
    for &p in perm {
        out.push(g.node_type(p) as u8);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(g.edge_type(perm[i], perm[j]) as u8);
        }
    }
    out
}
