use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::grow::{grow, GenerationRecord, GrowConfig, Seed};
use super::model::Model;
use super::PipelineError;
use crate::properties::PropertyTables;
use crate::scalar::Scalar;

/// Aggregates of one generated batch. Means are `None` when no record
/// qualifies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub count: usize,
    pub validity_rate: f64,
    /// Distinct strings over all strings.
    pub uniqueness_rate: f64,
    /// Mean QED of valid records.
    pub mean_qed: Option<f64>,
    /// Mean QED over the first occurrence of each valid string.
    pub mean_qed_valid_unique: Option<f64>,
}

/// First occurrence of each distinct valid string, in batch order.
pub fn valid_unique(records: &[GenerationRecord]) -> Vec<&GenerationRecord> {
    let mut seen = HashSet::new();
    records
        .iter()
        .filter(|r| r.valid && seen.insert(r.smiles.as_str()))
        .collect()
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn generation_stats(generation: usize, records: &[GenerationRecord]) -> GenerationStats {
    let count = records.len();
    let rate = |k: usize| if count == 0 { 0.0 } else { k as f64 / count as f64 };
    let distinct: HashSet<&str> = records.iter().map(|r| r.smiles.as_str()).collect();
    GenerationStats {
        generation,
        count,
        validity_rate: rate(records.iter().filter(|r| r.valid).count()),
        uniqueness_rate: rate(distinct.len()),
        mean_qed: mean(records.iter().filter_map(|r| r.qed)),
        mean_qed_valid_unique: mean(valid_unique(records).into_iter().filter_map(|r| r.qed)),
    }
}

/// Grows `n` molecules. Item `i` draws from its own ChaCha stream `i` keyed
/// by one value taken from `rng`, so the batch does not depend on how the
/// work is scheduled across threads.
pub fn generate_batch<T: Scalar, R: Rng + ?Sized>(
    seed: &Seed,
    model: &Model<T>,
    n: usize,
    cfg: &GrowConfig,
    generation: usize,
    tables: &PropertyTables,
    rng: &mut R,
) -> Result<(Vec<GenerationRecord>, GenerationStats), PipelineError> {
    let key: u64 = rng.gen();
    let records = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut item_rng = ChaCha8Rng::seed_from_u64(key);
            item_rng.set_stream(i as u64);
            let mut r = grow(seed, model, cfg, tables, &mut item_rng)?;
            r.generation = generation;
            r.index = i;
            Ok(r)
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    let stats = generation_stats(generation, &records);
    Ok((records, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{init_params, ModelConfig};
    use crate::pipeline::grow::DEFAULT_SEED;
    use crate::pipeline::model::corpus_vocabulary;

    fn model() -> Model<f64> {
        let vocab = corpus_vocabulary(&["CCO", "c1ccccc1N"], &[DEFAULT_SEED]).unwrap();
        let config = ModelConfig {
            vocab_size: vocab.len(),
            embed_dim: 4,
            attention_dim: 4,
            hidden_dim: 6,
            window_len: 5,
            rng_seed: 2,
        };
        Model {
            params: init_params(&config, &mut ChaCha8Rng::seed_from_u64(2)),
            config,
            vocab,
        }
    }

    fn run(n: usize, seed: u64) -> (Vec<GenerationRecord>, GenerationStats) {
        let s = Seed::new(DEFAULT_SEED).unwrap();
        let cfg = GrowConfig {
            temperature: 1.0,
            max_len: 30,
        };
        generate_batch(&s, &model(), n, &cfg, 1, PropertyTables::builtin(), &mut ChaCha8Rng::seed_from_u64(seed))
            .unwrap()
    }

    #[test]
    fn empty_batch() {
        let (records, stats) = run(0, 1);
        assert!(records.is_empty());
        assert_eq!(stats.count, 0);
        assert_eq!(stats.mean_qed, None);
    }

    #[test]
    fn batches_repeat_and_respect_contract() {
        let (a, sa) = run(40, 5);
        let (b, sb) = run(40, 5);
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        for (i, r) in a.iter().enumerate() {
            assert_eq!(r.index, i);
            assert!(r.smiles.starts_with(DEFAULT_SEED));
            assert!(r.length <= 30);
            if r.valid {
                assert_eq!(r.contains_fragment, Some(true));
            }
        }
        assert_ne!(run(40, 6).0, a);
    }

    #[test]
    fn stats_of_all_invalid_batch() {
        let bad = |i| GenerationRecord {
            generation: 1,
            index: i,
            smiles: "C(".into(),
            valid: false,
            contains_fragment: None,
            length: 2,
            descriptors: None,
            qed: None,
        };
        let s = generation_stats(1, &[bad(0), bad(1)]);
        assert_eq!(s.validity_rate, 0.0);
        assert_eq!(s.uniqueness_rate, 0.5);
        assert_eq!(s.mean_qed_valid_unique, None);
    }
}
