use log::info;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::windows::{encode_smiles, make_windows, TrainingWindow};
use super::PipelineError;
use crate::neural::{
    accumulate_gradient, adam_step, forward_into, init_params, AdamConfig, AdamState,
    ForwardTrace, ModelConfig, ModelParams, Workspace,
};
use crate::scalar::Scalar;
use crate::smiles::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    /// Windows per Adam step.
    pub batch_size: usize,
    /// Share of molecules held out for model selection. When it rounds to
    /// zero molecules the training set doubles as the holdout.
    pub holdout_fraction: f64,
    pub adam: AdamConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 5,
            batch_size: 32,
            holdout_fraction: 0.05,
            adam: AdamConfig::default(),
        }
    }
}

/// Mean cross-entropy and next-token accuracy of one epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    /// Running mean over the epoch's updates.
    pub train_loss: f64,
    pub train_accuracy: f64,
    /// Evaluated after the epoch.
    pub holdout_loss: f64,
    pub holdout_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainLog {
    pub epochs: Vec<EpochLog>,
    /// 1-based epoch whose parameters were returned; 0 when no epoch ran.
    pub best_epoch: usize,
}

impl TrainLog {
    pub fn best(&self) -> Option<&EpochLog> {
        self.epochs.get(self.best_epoch.checked_sub(1)?)
    }
}

/// Trains a freshly initialised model on `smiles`. Weights come from
/// `config.rng_seed`; the holdout split and window order from `rng`.
pub fn train<T: Scalar, R: Rng + ?Sized>(
    smiles: &[&str],
    vocab: &Vocabulary,
    config: &ModelConfig,
    tc: &TrainConfig,
    rng: &mut R,
) -> Result<(ModelParams<T>, TrainLog), PipelineError> {
    config.validate()?;
    if config.vocab_size != vocab.len() {
        return Err(PipelineError::VocabularyMismatch {
            model: config.vocab_size,
            vocab: vocab.len(),
        });
    }
    let params = init_params(config, &mut ChaCha8Rng::seed_from_u64(config.rng_seed));
    fine_tune(params, smiles, vocab, config.window_len, tc, rng)
}

/// Continues training `params` on `smiles` and returns the parameters with
/// the lowest holdout loss seen after any epoch.
pub fn fine_tune<T: Scalar, R: Rng + ?Sized>(
    params: ModelParams<T>,
    smiles: &[&str],
    vocab: &Vocabulary,
    window_len: usize,
    tc: &TrainConfig,
    rng: &mut R,
) -> Result<(ModelParams<T>, TrainLog), PipelineError> {
    if smiles.is_empty() {
        return Err(PipelineError::EmptyCorpus);
    }
    let mut order: Vec<usize> = (0..smiles.len()).collect();
    order.shuffle(rng);
    let n_hold = (smiles.len() as f64 * tc.holdout_fraction).round() as usize;
    let (hold, fit) = if n_hold == 0 || n_hold >= smiles.len() {
        (&order[..], &order[..])
    } else {
        order.split_at(n_hold)
    };
    let windows = |idx: &[usize]| -> Result<Vec<TrainingWindow>, PipelineError> {
        let mut out = Vec::new();
        for &i in idx {
            out.extend(make_windows(&encode_smiles(smiles[i], vocab)?, window_len));
        }
        Ok(out)
    };
    let (train_set, holdout) = (windows(fit)?, windows(hold)?);
    info!(
        "event=train_start molecules={} train_windows={} holdout_windows={}",
        smiles.len(),
        train_set.len(),
        holdout.len()
    );

    let mut params = params;
    let mut adam = AdamState::new(&params);
    let mut grads = params.clone();
    let mut ws = Workspace::new(&params, window_len);
    let mut best = params.clone();
    let mut log = TrainLog::default();
    let mut best_loss = f64::INFINITY;
    let batch = tc.batch_size.max(1);
    let mut visit: Vec<usize> = (0..train_set.len()).collect();
    for epoch in 1..=tc.epochs {
        visit.shuffle(rng);
        let (mut loss_sum, mut hits) = (0.0, 0usize);
        for chunk in visit.chunks(batch) {
            grads.fill_zero();
            for &w in chunk {
                let w = &train_set[w];
                let loss = accumulate_gradient(&w.input, w.target, &params, &mut ws, &mut grads)?;
                loss_sum += loss.as_f64();
                hits += usize::from(argmax(ws.trace.probs()) == w.target);
            }
            grads.scale(T::of(1.0 / chunk.len() as f64));
            adam_step(&mut params, &grads, &mut adam, &tc.adam)?;
        }
        let n = train_set.len().max(1) as f64;
        let (holdout_loss, holdout_accuracy) = evaluate(&params, &holdout, &mut ws.trace)?;
        let entry = EpochLog {
            epoch,
            train_loss: loss_sum / n,
            train_accuracy: hits as f64 / n,
            holdout_loss,
            holdout_accuracy,
        };
        info!(
            "event=epoch epoch={epoch} train_loss={:.6} train_acc={:.6} holdout_loss={:.6} holdout_acc={:.6}",
            entry.train_loss, entry.train_accuracy, entry.holdout_loss, entry.holdout_accuracy
        );
        if holdout_loss < best_loss {
            best_loss = holdout_loss;
            best.clone_from(&params);
            log.best_epoch = epoch;
        }
        log.epochs.push(entry);
    }
    Ok((best, log))
}

/// Mean cross-entropy and accuracy of `params` over `windows`.
pub fn evaluate<T: Scalar>(
    params: &ModelParams<T>,
    windows: &[TrainingWindow],
    trace: &mut ForwardTrace<T>,
) -> Result<(f64, f64), PipelineError> {
    if windows.is_empty() {
        return Ok((f64::NAN, f64::NAN));
    }
    let (mut loss, mut hits) = (0.0, 0usize);
    for w in windows {
        forward_into(&w.input, params, trace)?;
        loss += trace.loss(w.target).as_f64();
        hits += usize::from(argmax(trace.probs()) == w.target);
    }
    let n = windows.len() as f64;
    Ok((loss / n, hits as f64 / n))
}

fn argmax<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::{build_vocabulary, tokenize};

    fn setup(corpus: &[&str]) -> (Vocabulary, ModelConfig) {
        let toks: Vec<_> = corpus.iter().map(|s| tokenize(s).unwrap()).collect();
        let vocab = build_vocabulary(&toks).unwrap();
        let config = ModelConfig {
            vocab_size: vocab.len(),
            embed_dim: 8,
            attention_dim: 8,
            hidden_dim: 16,
            window_len: 6,
            rng_seed: 3,
        };
        (vocab, config)
    }

    #[test]
    fn memorises_one_molecule() {
        let corpus = ["COP(=O)(F)OC"];
        let (vocab, config) = setup(&corpus);
        let tc = TrainConfig {
            epochs: 200,
            batch_size: 4,
            adam: AdamConfig {
                lr: 1e-2,
                ..AdamConfig::default()
            },
            ..TrainConfig::default()
        };
        let (params, log) =
            train::<f64, _>(&corpus, &vocab, &config, &tc, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let windows = make_windows(&encode_smiles(corpus[0], &vocab).unwrap(), 6);
        let mut trace = ForwardTrace::new(&params, 6);
        let (_, acc) = evaluate(&params, &windows, &mut trace).unwrap();
        assert_eq!(acc, 1.0);
        assert_eq!(log.best().unwrap().holdout_accuracy, 1.0);
    }

    #[test]
    fn same_seed_same_log() {
        let corpus = ["CCO", "CCN", "c1ccccc1O", "CC(=O)O", "CCCl"];
        let (vocab, config) = setup(&corpus);
        let tc = TrainConfig {
            epochs: 3,
            holdout_fraction: 0.2,
            ..TrainConfig::default()
        };
        let run = || {
            train::<f64, _>(&corpus, &vocab, &config, &tc, &mut ChaCha8Rng::seed_from_u64(9)).unwrap()
        };
        let (p1, l1) = run();
        let (p2, l2) = run();
        assert_eq!(l1, l2);
        assert_eq!(p1, p2);
    }

    #[test]
    fn empty_corpus_rejected() {
        let (vocab, config) = setup(&["C"]);
        let err = train::<f64, _>(&[], &vocab, &config, &TrainConfig::default(), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(matches!(err, Err(PipelineError::EmptyCorpus)));
    }
}
