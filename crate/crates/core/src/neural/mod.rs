//! Embedding → additive self-attention → LSTM → softmax next-token model
//! with exact gradients, Adam, sampling and checkpoints.

mod adam;
mod backward;
mod checkpoint;
mod config;
mod forward;
mod gradcheck;
mod matrix;
mod params;
mod sample;

use std::path::Path;

use thiserror::Error;

pub use adam::{adam_step, AdamCoefficients, AdamConfig, AdamState};
pub use backward::{accumulate_gradient, loss_and_backward, Workspace};
pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, FORMAT_VERSION,
};
pub use config::ModelConfig;
pub use forward::{forward, forward_into, ForwardTrace};
pub use gradcheck::{
    grad_check, grad_check_at, grad_check_with, random_example, relative_error, OracleScalar,
    FD_EPSILON,
};
pub use matrix::Matrix;
pub use params::{init_params, ModelParams, ATTENTION_INIT_STD, TENSOR_NAMES};
pub use sample::sample_next;

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("token id {id} is outside the vocabulary of {vocab}")]
    IdOutOfRange { id: usize, vocab: usize },
    #[error("window has {found} ids, expected {expected}")]
    WindowLength { expected: usize, found: usize },
    #[error("tensor shapes do not match")]
    ShapeMismatch,
    #[error("probabilities are negative, NaN or all zero")]
    DegenerateDistribution,
    #[error("invalid model config: {0}")]
    InvalidConfig(String),
    #[error("I/O failure on {path}: {source}")]
    IoFailure {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("checkpoint format version {found:?} is not the supported {expected:?}")]
    VersionMismatch { found: u8, expected: u8 },
    #[error("checkpoint checksum mismatch")]
    ChecksumMismatch,
    #[error("malformed checkpoint: {0}")]
    MalformedCheckpoint(String),
}

impl NeuralError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> NeuralError {
        NeuralError::IoFailure {
            path: path.display().to_string(),
            source,
        }
    }
}
