//! QM9-style structure-file ingestion: SDF parsing into one-hot graph
//! samples, seeded train/validation splitting, and the binary dataset and
//! sample-set containers.

mod dataset;
mod error;
mod sdf;
mod split;
mod vocab;

pub use dataset::{
    load_dataset, load_samples, save_dataset, save_samples, DATASET_MAGIC, SAMPLES_MAGIC,
};
pub use error::IngestError;
pub use sdf::{parse_sdf, parse_sdf_str, IngestReport};
pub use split::{sample_split, DatasetSplit};
pub use vocab::VocabSpec;
