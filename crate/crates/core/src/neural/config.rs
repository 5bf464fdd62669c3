use super::NeuralError;

/// Model dimensions and the seed used to initialise its weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelConfig {
    pub vocab_size: usize,
    pub embed_dim: usize,
    pub attention_dim: usize,
    pub hidden_dim: usize,
    pub window_len: usize,
    pub rng_seed: u64,
}

impl ModelConfig {
    pub const DEFAULT_EMBED_DIM: usize = 64;
    pub const DEFAULT_ATTENTION_DIM: usize = 64;
    pub const DEFAULT_HIDDEN_DIM: usize = 256;
    pub const DEFAULT_WINDOW_LEN: usize = 40;

    /// Default dimensions for a vocabulary of the given size.
    pub fn new(vocab_size: usize) -> ModelConfig {
        ModelConfig {
            vocab_size,
            embed_dim: Self::DEFAULT_EMBED_DIM,
            attention_dim: Self::DEFAULT_ATTENTION_DIM,
            hidden_dim: Self::DEFAULT_HIDDEN_DIM,
            window_len: Self::DEFAULT_WINDOW_LEN,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        let dims = [
            ("vocab_size", self.vocab_size),
            ("embed_dim", self.embed_dim),
            ("attention_dim", self.attention_dim),
            ("hidden_dim", self.hidden_dim),
        ];
        for (name, value) in dims {
            if value == 0 {
                return Err(NeuralError::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        if self.window_len < 2 {
            return Err(NeuralError::InvalidConfig("window_len must be at least 2".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ModelConfig::new(30);
        assert_eq!((c.embed_dim, c.attention_dim, c.hidden_dim, c.window_len), (64, 64, 256, 40));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn degenerate_dimensions_rejected() {
        let mut c = ModelConfig::new(30);
        c.window_len = 1;
        assert!(c.validate().is_err());
        let mut c = ModelConfig::new(0);
        c.window_len = 4;
        assert!(c.validate().is_err());
    }
}
