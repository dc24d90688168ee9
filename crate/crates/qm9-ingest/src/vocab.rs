use container::{Reader, Writer};

use crate::IngestError;

/// Node- and edge-type vocabulary plus the fixed node-slot count.
///
/// One node type is the designated "empty" pad and one edge type the
/// designated "no-edge"; their indices are part of the spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabSpec {
    node_symbols: Vec<String>,
    edge_symbols: Vec<String>,
    max_nodes: usize,
    empty_index: usize,
    no_edge_index: usize,
}

impl VocabSpec {
    pub fn new(
        node_symbols: Vec<String>,
        edge_symbols: Vec<String>,
        max_nodes: usize,
        empty_index: usize,
        no_edge_index: usize,
    ) -> Result<Self, IngestError> {
        if node_symbols.len() < 2 || edge_symbols.len() < 2 || max_nodes < 1 {
            return Err(IngestError::Vocab(format!(
                "need T >= 2, B >= 2, N >= 1 (got T={}, B={}, N={})",
                node_symbols.len(),
                edge_symbols.len(),
                max_nodes
            )));
        }
        if empty_index >= node_symbols.len() || no_edge_index >= edge_symbols.len() {
            return Err(IngestError::Vocab(
                "empty/no-edge index out of range".into(),
            ));
        }
        let unique = |v: &[String]| {
            let mut s = v.to_vec();
            s.sort();
            s.dedup();
            s.len() == v.len()
        };
        if !unique(&node_symbols) || !unique(&edge_symbols) {
            return Err(IngestError::Vocab("duplicate symbols".into()));
        }
        Ok(Self {
            node_symbols,
            edge_symbols,
            max_nodes,
            empty_index,
            no_edge_index,
        })
    }

    /// QM9 convention: C, N, O, F heavy atoms plus pad; no-edge, single,
    /// double, triple and aromatic bonds; up to 9 heavy atoms.
    pub fn qm9() -> Self {
        Self {
            node_symbols: ["C", "N", "O", "F", "empty"]
                .map(str::to_string)
                .to_vec(),
            edge_symbols: ["no-edge", "single", "double", "triple", "aromatic"]
                .map(str::to_string)
                .to_vec(),
            max_nodes: 9,
            empty_index: 4,
            no_edge_index: 0,
        }
    }

    pub fn num_node_types(&self) -> usize {
        self.node_symbols.len()
    }

    pub fn num_edge_types(&self) -> usize {
        self.edge_symbols.len()
    }

    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }

    pub fn empty_index(&self) -> usize {
        self.empty_index
    }

    pub fn no_edge_index(&self) -> usize {
        self.no_edge_index
    }

    pub fn node_symbol(&self, index: usize) -> &str {
        &self.node_symbols[index]
    }

    pub fn edge_symbol(&self, index: usize) -> &str {
        &self.edge_symbols[index]
    }

    pub fn node_index(&self, symbol: &str) -> Option<usize> {
        self.node_symbols.iter().position(|s| s == symbol)
    }

    /// Maps an SDF bond-order field to an edge-type index:
    /// 1/2/3/4 mean single/double/triple/aromatic.
    pub fn edge_index_for_bond_order(&self, order: u32) -> Option<usize> {
        let symbol = match order {
            1 => "single",
            2 => "double",
            3 => "triple",
            4 => "aromatic",
            _ => return None,
        };
        self.edge_symbols.iter().position(|s| s == symbol)
    }

    pub fn encode_into(&self, w: &mut Writer) {
        w.u32(self.node_symbols.len() as u32);
        for s in &self.node_symbols {
            w.string(s);
        }
        w.u32(self.edge_symbols.len() as u32);
        for s in &self.edge_symbols {
            w.string(s);
        }
        w.u32(self.max_nodes as u32);
        w.u32(self.empty_index as u32);
        w.u32(self.no_edge_index as u32);
    }

    pub fn decode_from(r: &mut Reader) -> Result<Self, IngestError> {
        let nt = r.u32()? as usize;
        let mut node_symbols = Vec::with_capacity(nt);
        for _ in 0..nt {
            node_symbols.push(r.string()?);
        }
        let ne = r.u32()? as usize;
        let mut edge_symbols = Vec::with_capacity(ne);
        for _ in 0..ne {
            edge_symbols.push(r.string()?);
        }
        let max_nodes = r.u32()? as usize;
        let empty_index = r.u32()? as usize;
        let no_edge_index = r.u32()? as usize;
        Self::new(node_symbols, edge_symbols, max_nodes, empty_index, no_edge_index)
    }
}
