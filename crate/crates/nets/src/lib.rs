//! The three networks: generator MLP, R-GCN discriminator and R-GCN reward
//! network, built from relational convolution layers and a gated attention
//! readout.

mod batch;
mod error;
mod generator;
mod init;
mod rgcn;
mod spec;

pub use batch::GraphBatch;
pub use error::NetsError;
pub use generator::generate;
pub use init::{init_generator_params, init_rgcn_params};
pub use rgcn::{attention_readout, discriminate, reward_predict, rgcn_layer};
pub use spec::{GeneratorSpec, Head, RgcnSpec};
