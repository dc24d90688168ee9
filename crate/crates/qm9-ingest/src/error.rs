use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error in record {record}: {msg}")]
    Parse { record: usize, msg: String },
    #[error("insufficient records: need {needed}, have {available}")]
    Insufficient { needed: usize, available: usize },
    #[error("invalid vocabulary: {0}")]
    Vocab(String),
    #[error(transparent)]
    Container(#[from] container::ContainerError),
    #[error(transparent)]
    Graph(#[from] graph_core::GraphError),
}
