//! Binary containers: the dataset split file (magic `GGAN`) and the plain
//! sample-set file (magic `GSMP`). Both carry the vocabulary, packed one-hot
//! tensors as unsigned bytes, and the shared framing (version byte and
//! trailing CRC-32). Integers are little-endian throughout.

use std::path::Path;

use container::{read_framed, write_framed, Reader, Writer};
use graph_core::GraphSample;

use crate::{DatasetSplit, IngestError, VocabSpec};

pub const DATASET_MAGIC: [u8; 4] = *b"GGAN";
pub const SAMPLES_MAGIC: [u8; 4] = *b"GSMP";
const VERSION: u8 = 1;

fn write_graphs(w: &mut Writer, graphs: &[GraphSample]) {
    for g in graphs {
        w.raw(&g.to_onehot_bytes());
    }
}

fn read_graphs(
    r: &mut Reader,
    vocab: &VocabSpec,
    count: usize,
) -> Result<Vec<GraphSample>, IngestError> {
    let n = vocab.max_nodes();
    let (t, b) = (vocab.num_node_types(), vocab.num_edge_types());
    let bytes_per = n * t + n * n * b;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let raw = r.take(bytes_per)?;
        out.push(GraphSample::from_onehot_bytes(
            n,
            t,
            b,
            vocab.empty_index(),
            vocab.no_edge_index(),
            raw,
        )?);
    }
    Ok(out)
}

pub fn save_dataset(
    split: &DatasetSplit,
    vocab: &VocabSpec,
    path: &Path,
) -> Result<(), IngestError> {
    let mut w = Writer::new();
    vocab.encode_into(&mut w);
    w.u64(split.seed);
    w.u32(split.train.len() as u32);
    w.u32(split.validation.len() as u32);
    write_graphs(&mut w, &split.train);
    write_graphs(&mut w, &split.validation);
    write_framed(path, DATASET_MAGIC, VERSION, &w.into_bytes())?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<(DatasetSplit, VocabSpec), IngestError> {
    let (_, payload) = read_framed(path, DATASET_MAGIC, VERSION)?;
    let mut r = Reader::new(&payload);
    let vocab = VocabSpec::decode_from(&mut r)?;
    let seed = r.u64()?;
    let train_n = r.u32()? as usize;
    let val_n = r.u32()? as usize;
    let train = read_graphs(&mut r, &vocab, train_n)?;
    let validation = read_graphs(&mut r, &vocab, val_n)?;
    Ok((
        DatasetSplit {
            train,
            validation,
            seed,
        },
        vocab,
    ))
}

pub fn save_samples(
    samples: &[GraphSample],
    vocab: &VocabSpec,
    path: &Path,
) -> Result<(), IngestError> {
    let mut w = Writer::new();
    vocab.encode_into(&mut w);
    w.u32(samples.len() as u32);
    write_graphs(&mut w, samples);
    write_framed(path, SAMPLES_MAGIC, VERSION, &w.into_bytes())?;
    Ok(())
}

pub fn load_samples(path: &Path) -> Result<(Vec<GraphSample>, VocabSpec), IngestError> {
    let (_, payload) = read_framed(path, SAMPLES_MAGIC, VERSION)?;
    let mut r = Reader::new(&payload);
    let vocab = VocabSpec::decode_from(&mut r)?;
    let count = r.u32()? as usize;
    let samples = read_graphs(&mut r, &vocab, count)?;
    Ok((samples, vocab))
}
