//! SDF / MOL V2000 parsing into [`GraphSample`]s.
//!
//! Hydrogens are dropped, atoms map by symbol, bonds by their order field
//! (1/2/3/4 for single/double/triple/aromatic). Molecules with atoms outside
//! the vocabulary or with more heavy atoms than the vocabulary's node count
//! are skipped and counted, not errored.

use std::fs;
use std::path::Path;

use graph_core::GraphSample;

use crate::{IngestError, VocabSpec};

/// Parse outcome: samples in record order plus skip counters.
#[derive(Debug)]
pub struct IngestReport {
    pub samples: Vec<GraphSample>,
    pub records: usize,
    pub skipped_out_of_vocab: usize,
    pub skipped_too_large: usize,
}

pub fn parse_sdf(path: &Path, vocab: &VocabSpec) -> Result<IngestReport, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_sdf_str(&text, vocab)
}

pub fn parse_sdf_str(text: &str, vocab: &VocabSpec) -> Result<IngestReport, IngestError> {
    let mut report = IngestReport {
        samples: Vec::new(),
        records: 0,
        skipped_out_of_vocab: 0,
        skipped_too_large: 0,
    };
    let lines: Vec<&str> = text.lines().collect();
    let mut pos = 0;
    while pos < lines.len() {
        // Skip blank padding between records.
        if lines[pos].trim().is_empty() && lines[pos..].iter().all(|l| l.trim().is_empty()) {
            break;
        }
        let record = report.records;
        let end = lines[pos..]
            .iter()
            .position(|l| l.trim_end() == "$$$$")
            .map(|off| pos + off)
            .unwrap_or(lines.len());
        parse_record(&lines[pos..end], record, vocab, &mut report)?;
        report.records += 1;
        pos = end + 1;
    }
    Ok(report)
}

enum Outcome {
    Sample(GraphSample),
    OutOfVocab,
    TooLarge,
}

fn parse_record(
    lines: &[&str],
    record: usize,
    vocab: &VocabSpec,
    report: &mut IngestReport,
) -> Result<(), IngestError> {
    match parse_mol_block(lines, record, vocab)? {
        Outcome::Sample(g) => report.samples.push(g),
        Outcome::OutOfVocab => report.skipped_out_of_vocab += 1,
        Outcome::TooLarge => report.skipped_too_large += 1,
    }
    Ok(())
}

fn parse_mol_block(
    lines: &[&str],
    record: usize,
    vocab: &VocabSpec,
) -> Result<Outcome, IngestError> {
    let err = |msg: String| IngestError::Parse { record, msg };
    if lines.len() < 4 {
        return Err(err(format!("record has only {} lines", lines.len())));
    }
    let counts = lines[3];
    if !counts.contains("V2000") {
        return Err(err(format!("counts line is not V2000: {counts:?}")));
    }
    fn field(line: &str, range: std::ops::Range<usize>) -> Option<&str> {
        line.get(range).map(str::trim)
    }
    let num_atoms: usize = field(counts, 0..3)
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| err(format!("malformed atom count in counts line {counts:?}")))?;
    let num_bonds: usize = field(counts, 3..6)
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| err(format!("malformed bond count in counts line {counts:?}")))?;

    let atom_lines = lines
        .get(4..4 + num_atoms)
        .ok_or_else(|| err(format!("truncated atom block: expected {num_atoms} atoms")))?;
    let bond_lines = lines
        .get(4 + num_atoms..4 + num_atoms + num_bonds)
        .ok_or_else(|| err(format!("truncated bond block: expected {num_bonds} bonds")))?;

    // Atom block: x y z symbol ... — the symbol is the fourth token.
    let mut symbols = Vec::with_capacity(num_atoms);
    for (k, line) in atom_lines.iter().enumerate() {
        let mut tokens = line.split_whitespace();
        let sym = tokens
            .nth(3)
            .ok_or_else(|| err(format!("malformed atom line {}: {line:?}", k + 1)))?;
        symbols.push(sym);
    }

    // Heavy-atom selection: hydrogens drop, everything else must be in vocab.
    let mut heavy_slot = vec![None::<usize>; num_atoms];
    let mut heavy_types = Vec::new();
    for (k, sym) in symbols.iter().enumerate() {
        if *sym == "H" {
            continue;
        }
        match vocab.node_index(sym) {
            Some(t) => {
                heavy_slot[k] = Some(heavy_types.len());
                heavy_types.push(t as u8);
            }
            None => return Ok(Outcome::OutOfVocab),
        }
    }
    if heavy_types.len() > vocab.max_nodes() {
        return Ok(Outcome::TooLarge);
    }

    let n = vocab.max_nodes();
    let mut node_types = vec![vocab.empty_index() as u8; n];
    node_types[..heavy_types.len()].copy_from_slice(&heavy_types);
    let mut g = GraphSample::new(
        n,
        vocab.num_node_types(),
        vocab.num_edge_types(),
        vocab.empty_index(),
        vocab.no_edge_index(),
        node_types,
        vec![vocab.no_edge_index() as u8; n * n],
    )?;

    // Bond block: fixed 3-column fields, 1-based atom indices.
    for (k, line) in bond_lines.iter().enumerate() {
        let parse3 = |range: std::ops::Range<usize>, what: &str| -> Result<u32, IngestError> {
            field(line, range)
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| err(format!("malformed {what} in bond line {}: {line:?}", k + 1)))
        };
        let ai = parse3(0..3, "first atom index")? as usize;
        let bi = parse3(3..6, "second atom index")? as usize;
        let order = parse3(6..9, "bond order")?;
        if ai == 0 || bi == 0 || ai > num_atoms || bi > num_atoms {
            return Err(err(format!(
                "bond line {} references atom {}..{} outside 1..={num_atoms}",
                k + 1,
                ai,
                bi
            )));
        }
        let (Some(i), Some(j)) = (heavy_slot[ai - 1], heavy_slot[bi - 1]) else {
            continue; // bond to a hydrogen
        };
        let Some(edge) = vocab.edge_index_for_bond_order(order) else {
            return Ok(Outcome::OutOfVocab);
        };
        g.set_edge(i, j, edge as u8);
    }
    g.check_invariants()?;
    Ok(Outcome::Sample(g))
}
