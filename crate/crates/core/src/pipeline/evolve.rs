use std::collections::HashSet;

use log::info;
use rand::Rng;

use super::batch::{generate_batch, valid_unique, GenerationStats};
use super::grow::{GenerationRecord, GrowConfig, Seed};
use super::model::Model;
use super::train::{fine_tune, TrainConfig};
use super::PipelineError;
use crate::properties::PropertyTables;
use crate::scalar::Scalar;

/// Settings of the generate → filter → fine-tune loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub generations: usize,
    pub batch_size: usize,
    pub grow: GrowConfig,
    /// Valid unique molecules scoring strictly above this join the
    /// fine-tuning set.
    pub qed_augment_threshold: f64,
    pub fine_tune_epochs: usize,
    /// Stop once the mean QED of valid unique molecules rises by less than
    /// this after a fine-tune.
    pub min_improvement: f64,
    /// Optimiser and batching for fine-tuning; `epochs` is ignored.
    pub train: TrainConfig,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            generations: 3,
            batch_size: 1200,
            grow: GrowConfig::default(),
            qed_augment_threshold: 0.5,
            fine_tune_epochs: 2,
            min_improvement: 0.01,
            train: TrainConfig {
                holdout_fraction: 0.0,
                ..TrainConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome<T> {
    pub stats: Vec<GenerationStats>,
    pub records: Vec<GenerationRecord>,
    /// Model after the last fine-tune.
    pub model: Model<T>,
    /// Accumulated fine-tuning molecules in insertion order.
    pub fine_tune_set: Vec<String>,
}

/// Runs up to `cfg.generations` rounds. Each round generates a batch and
/// records its stats; all but the last then add their qualifying molecules
/// to the fine-tuning set and fine-tune on the whole set.
pub fn run_generations<T: Scalar, R: Rng + ?Sized>(
    model: Model<T>,
    seed: &Seed,
    cfg: &EvolveConfig,
    tables: &PropertyTables,
    rng: &mut R,
) -> Result<EvolveOutcome<T>, PipelineError> {
    let mut model = model;
    let mut stats: Vec<GenerationStats> = Vec::new();
    let mut records = Vec::new();
    let mut set: Vec<String> = Vec::new();
    let mut in_set: HashSet<String> = HashSet::new();
    let mut tuned_last_round = false;
    for g in 1..=cfg.generations {
        let (batch, s) = generate_batch(seed, &model, cfg.batch_size, &cfg.grow, g, tables, rng)?;
        info!(
            "event=generation generation={g} count={} validity={:.4} uniqueness={:.4} mean_qed={} mean_qed_valid_unique={}",
            s.count,
            s.validity_rate,
            s.uniqueness_rate,
            s.mean_qed.map_or("absent".into(), |q| format!("{q:.4}")),
            s.mean_qed_valid_unique.map_or("absent".into(), |q| format!("{q:.4}")),
        );
        let previous = stats.last().and_then(|p| p.mean_qed_valid_unique);
        stats.push(s);
        let fresh: Vec<String> = valid_unique(&batch)
            .into_iter()
            .filter(|r| r.qed.is_some_and(|q| q > cfg.qed_augment_threshold))
            .map(|r| r.smiles.clone())
            .collect();
        records.extend(batch);
        if tuned_last_round {
            let gain = match (previous, s.mean_qed_valid_unique) {
                (Some(a), Some(b)) => b - a,
                _ => f64::NEG_INFINITY,
            };
            if gain < cfg.min_improvement {
                info!("event=early_stop generation={g} gain={gain:.4}");
                break;
            }
        }
        tuned_last_round = false;
        if g == cfg.generations {
            break;
        }
        for smiles in fresh {
            if in_set.insert(smiles.clone()) {
                set.push(smiles);
            }
        }
        info!("event=augment generation={g} fine_tune_set={}", set.len());
        if set.is_empty() || cfg.fine_tune_epochs == 0 {
            continue;
        }
        let smiles: Vec<&str> = set.iter().map(String::as_str).collect();
        let tc = TrainConfig {
            epochs: cfg.fine_tune_epochs,
            ..cfg.train
        };
        let (params, _) = fine_tune(
            model.params,
            &smiles,
            &model.vocab,
            model.config.window_len,
            &tc,
            rng,
        )?;
        model.params = params;
        tuned_last_round = true;
    }
    Ok(EvolveOutcome {
        stats,
        records,
        model,
        fine_tune_set: set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{init_params, ModelConfig};
    use crate::pipeline::grow::DEFAULT_SEED;
    use crate::pipeline::model::corpus_vocabulary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model() -> Model<f64> {
        let vocab = corpus_vocabulary(&["CCOC", "CC(C)O"], &[DEFAULT_SEED]).unwrap();
        let config = ModelConfig {
            vocab_size: vocab.len(),
            embed_dim: 4,
            attention_dim: 4,
            hidden_dim: 6,
            window_len: 5,
            rng_seed: 4,
        };
        Model {
            params: init_params(&config, &mut ChaCha8Rng::seed_from_u64(4)),
            config,
            vocab,
        }
    }

    fn evolve(cfg: EvolveConfig) -> EvolveOutcome<f64> {
        let seed = Seed::new(DEFAULT_SEED).unwrap();
        run_generations(model(), &seed, &cfg, PropertyTables::builtin(), &mut ChaCha8Rng::seed_from_u64(8))
            .unwrap()
    }

    fn small() -> EvolveConfig {
        EvolveConfig {
            batch_size: 20,
            grow: GrowConfig {
                temperature: 1.0,
                max_len: 20,
            },
            ..EvolveConfig::default()
        }
    }

    #[test]
    fn one_generation_never_fine_tunes() {
        let out = evolve(EvolveConfig {
            generations: 1,
            ..small()
        });
        assert_eq!(out.stats.len(), 1);
        assert!(out.fine_tune_set.is_empty());
        assert_eq!(out.model, model());
    }

    #[test]
    fn unreachable_threshold_keeps_all_generations() {
        let out = evolve(EvolveConfig {
            qed_augment_threshold: 1.0,
            ..small()
        });
        assert_eq!(out.stats.len(), 3);
        assert!(out.fine_tune_set.is_empty());
        assert_eq!(out.records.len(), 60);
    }

    #[test]
    fn fine_tune_set_holds_only_qualifying_molecules() {
        let cfg = EvolveConfig {
            qed_augment_threshold: 0.2,
            min_improvement: f64::NEG_INFINITY,
            ..small()
        };
        let out = evolve(cfg);
        for s in &out.fine_tune_set {
            let r = out.records.iter().find(|r| &r.smiles == s).unwrap();
            assert!(r.valid && r.qed.unwrap() > 0.2);
        }
        let again = evolve(cfg);
        assert_eq!(again.stats, out.stats);
    }
}
