use graph_core::GraphSample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::IngestError;

/// Seeded train/validation split with disjoint membership by source-record
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub train: Vec<GraphSample>,
    pub validation: Vec<GraphSample>,
    pub seed: u64,
}

/// Uniform sampling without replacement, deterministic per seed. Selected
/// samples keep their source order within each split.
pub fn sample_split(
    all: &[GraphSample],
    train_n: usize,
    val_n: usize,
    seed: u64,
) -> Result<DatasetSplit, IngestError> {
    if all.len() < train_n + val_n {
        return Err(IngestError::Insufficient {
            needed: train_n + val_n,
            available: all.len(),
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..all.len()).collect();
    indices.shuffle(&mut rng);
    let mut train_idx: Vec<usize> = indices[..train_n].to_vec();
    let mut val_idx: Vec<usize> = indices[train_n..train_n + val_n].to_vec();
    train_idx.sort_unstable();
    val_idx.sort_unstable();
    Ok(DatasetSplit {
        train: train_idx.iter().map(|&i| all[i].clone()).collect(),
        validation: val_idx.iter().map(|&i| all[i].clone()).collect(),
        seed,
    })
}
