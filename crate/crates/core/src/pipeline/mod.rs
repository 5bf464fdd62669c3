//! Corpus screening, windowed training, seeded growth and the
//! generate → filter → fine-tune loop.

mod batch;
mod corpus;
mod evolve;
mod grow;
mod model;
mod records;
mod train;
mod windows;

use std::path::Path;

use thiserror::Error;

use crate::neural::NeuralError;
use crate::properties::PropertyError;
use crate::smiles::SmilesError;

pub use batch::{generate_batch, generation_stats, valid_unique, GenerationStats};
pub use corpus::{load_corpus, screen_corpus, CorpusFormat, CorpusRecord, LoadedCorpus};
pub use evolve::{run_generations, EvolveConfig, EvolveOutcome};
pub use grow::{grow, sample_unseeded, GenerationRecord, GrowConfig, Seed, DEFAULT_SEED, REQUIRED_ELEMENTS};
pub use model::{corpus_vocabulary, vocab_path, Model};
pub use records::{
    read_records_csv, write_records_csv, write_stats_csv, RECORD_COLUMNS, STATS_COLUMNS,
};
pub use train::{evaluate, fine_tune, train, EpochLog, TrainConfig, TrainLog};
pub use windows::{encode_smiles, make_windows, TrainingWindow};

pub(crate) use records::fixed4;

/// Default QED cut for corpus screening.
pub const DEFAULT_QED_THRESHOLD: f64 = 0.65;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("I/O failure on {path}: {source}")]
    IoFailure {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("unknown corpus format {0:?}; expected smi or csv")]
    UnknownFormat(String),
    #[error("required column {0:?} is missing")]
    MissingColumn(String),
    #[error("line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("seed is missing required elements: {0}")]
    SeedMissingRequiredElements(String),
    #[error("seed does not tokenize: {0}")]
    SeedUntokenizable(#[source] SmilesError),
    #[error("no token prefix of seed {0:?} parses as a fragment")]
    SeedUnparseable(String),
    #[error("seed has {seed} tokens; max_len {max_len} leaves no room to grow")]
    SeedTooLong { seed: usize, max_len: usize },
    #[error("model expects {model} tokens but the vocabulary has {vocab}")]
    VocabularyMismatch { model: usize, vocab: usize },
    #[error(transparent)]
    Smiles(#[from] SmilesError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error(transparent)]
    Property(#[from] PropertyError),
}

impl PipelineError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> PipelineError {
        PipelineError::IoFailure {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn csv(path: &Path, source: csv::Error) -> PipelineError {
        PipelineError::Csv {
            path: path.display().to_string(),
            source,
        }
    }
}
