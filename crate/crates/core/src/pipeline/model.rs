use std::fs;
use std::path::{Path, PathBuf};

use super::PipelineError;
use crate::neural::{load_checkpoint, save_checkpoint, ModelConfig, ModelParams};
use crate::scalar::Scalar;
use crate::smiles::{build_vocabulary, tokenize, SmilesError, Token, Vocabulary};

/// Trained weights with the dimensions and vocabulary they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<T> {
    pub params: ModelParams<T>,
    pub config: ModelConfig,
    pub vocab: Vocabulary,
}

/// Path of the vocabulary stored next to a checkpoint.
pub fn vocab_path(checkpoint: &Path) -> PathBuf {
    let mut name = checkpoint.as_os_str().to_owned();
    name.push(".vocab");
    PathBuf::from(name)
}

impl<T: Scalar> Model<T> {
    /// Writes the checkpoint and a `<checkpoint>.vocab` file with one token
    /// text per line in id order.
    pub fn save(&self, checkpoint: &Path) -> Result<(), PipelineError> {
        save_checkpoint(&self.params, &self.config, checkpoint)?;
        let sidecar = vocab_path(checkpoint);
        let mut text = String::new();
        for t in self.vocab.texts() {
            text.push_str(t);
            text.push('\n');
        }
        fs::write(&sidecar, text).map_err(|e| PipelineError::io(&sidecar, e))
    }

    pub fn load(checkpoint: &Path) -> Result<Model<T>, PipelineError> {
        let (params, config) = load_checkpoint(checkpoint)?;
        let sidecar = vocab_path(checkpoint);
        let text = fs::read_to_string(&sidecar).map_err(|e| PipelineError::io(&sidecar, e))?;
        let texts: Vec<&str> = text.lines().collect();
        let vocab = Vocabulary::from_texts(&texts)?;
        if vocab.len() != config.vocab_size {
            return Err(PipelineError::VocabularyMismatch {
                model: config.vocab_size,
                vocab: vocab.len(),
            });
        }
        Ok(Model {
            params,
            config,
            vocab,
        })
    }
}

/// Vocabulary of a corpus plus any extra SMILES (such as a growth seed)
/// whose tokens must be representable.
pub fn corpus_vocabulary(smiles: &[&str], extra: &[&str]) -> Result<Vocabulary, SmilesError> {
    let tokens: Vec<Vec<Token>> = smiles
        .iter()
        .chain(extra)
        .map(|s| tokenize(s))
        .collect::<Result<_, _>>()?;
    build_vocabulary(&tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::init_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn save_and_load_round_trip() {
        let vocab = corpus_vocabulary(&["CCO"], &["COP(=O)(F)"]).unwrap();
        assert!(vocab.id("P").is_some() && vocab.id("F").is_some());
        let config = ModelConfig {
            vocab_size: vocab.len(),
            embed_dim: 3,
            attention_dim: 2,
            hidden_dim: 4,
            window_len: 5,
            rng_seed: 1,
        };
        let params = init_params::<f64, _>(&config, &mut ChaCha8Rng::seed_from_u64(1));
        let model = Model {
            params,
            config,
            vocab,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ckpt");
        model.save(&path).unwrap();
        assert!(vocab_path(&path).ends_with("m.ckpt.vocab"));
        assert_eq!(Model::<f64>::load(&path).unwrap(), model);
    }
}
