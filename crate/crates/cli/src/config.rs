//! Flat `key = value` run configuration. Defaults, then the config file,
//! then command-line flags; the last source wins.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use opforge_core::neural::{AdamConfig, ModelConfig};
use opforge_core::pipeline::{
    CorpusFormat, EvolveConfig, GrowConfig, TrainConfig, DEFAULT_SEED,
};
use opforge_core::report::{ColumnMap, Field};

use crate::CliError;

/// Every key with its default (empty when unset) and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("input", "", "input file: corpus (.smi/.csv), or generation CSV for report"),
    ("output", "", "output file written by the subcommand"),
    ("checkpoint", "", "model checkpoint; the vocabulary sits beside it as <checkpoint>.vocab"),
    ("records", "", "evolve: also write every generated record to this CSV"),
    ("format", "", "corpus format smi|csv; default from the input extension"),
    ("qed-threshold", "0.65", "prepare: keep molecules with QED strictly above this"),
    ("zero-alerts", "false", "score every molecule with ALERTS = 0"),
    ("embed-dim", "64", "token embedding width"),
    ("attention-dim", "64", "attention projection width"),
    ("hidden-dim", "256", "LSTM state width"),
    ("window-len", "40", "tokens of context per prediction"),
    ("epochs", "5", "training epochs"),
    ("batch-size", "32", "windows per optimiser step"),
    ("holdout-fraction", "0.05", "share of molecules held out for model selection"),
    ("lr", "0.001", "Adam learning rate"),
    ("seed", DEFAULT_SEED, "growth seed fragment; must contain P, F, O and C"),
    ("rng-seed", "0", "master random seed"),
    ("n", "1200", "molecules per generated batch"),
    ("temperature", "1.0", "sampling temperature"),
    ("max-len", "100", "maximum tokens per generated string, seed included"),
    ("generations", "3", "evolve: number of generations"),
    ("qed-augment-threshold", "0.5", "evolve: QED a molecule must exceed to join the fine-tuning set"),
    ("fine-tune-epochs", "2", "evolve: epochs of fine-tuning per generation"),
    ("min-improvement", "0.01", "evolve: stop when mean QED gains less than this"),
    ("opera", "", "report: CSV of external property predictions"),
    ("opera-id", "MoleculeID", "report: id column of the property CSV"),
    ("opera-logp", "LogP_pred", "report: logP column"),
    ("opera-clearance", "Clint_pred", "report: intrinsic clearance column"),
    ("opera-caco2", "CACO2_pred", "report: Caco-2 permeability column"),
    ("vina-dir", "", "report: directory of docking logs named <id>.log"),
    ("plot", "", "report: SVG scatter output"),
    ("x-field", "alogp", "report: x axis of the scatter (y is QED)"),
];

fn normalise(key: &str) -> String {
    key.trim().replace('_', "-")
}

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _, _)| *k == key)
}

/// Parses config file text into key/value pairs.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
        let key = normalise(key);
        if !known(&key) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// Defaults overlaid by the config file and then by flags.
pub fn resolve(
    file: Option<&Path>,
    flags: &[(String, String)],
) -> Result<BTreeMap<String, String>, CliError> {
    let mut map: BTreeMap<String, String> =
        KEYS.iter().map(|(k, v, _)| (k.to_string(), v.to_string())).collect();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        map.extend(parse_config_text(&text)?);
    }
    map.extend(flags.iter().cloned());
    Ok(map)
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(values: BTreeMap<String, String>) -> RunConfig {
        RunConfig { values }
    }

    fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.raw(key);
        raw.parse()
            .map_err(|_| CliError::Usage(format!("invalid value {raw:?} for {key}")))
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        Some(self.raw(key)).filter(|s| !s.is_empty()).map(PathBuf::from)
    }

    /// Fails with a usage error naming every listed key that is unset.
    pub fn require(&self, keys: &[&str]) -> Result<(), CliError> {
        let missing: Vec<&str> = keys.iter().copied().filter(|k| self.raw(k).is_empty()).collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("missing required setting: {}", missing.join(", "))))
        }
    }

    pub fn required_path(&self, key: &str) -> Result<PathBuf, CliError> {
        self.require(&[key])?;
        Ok(PathBuf::from(self.raw(key)))
    }

    pub fn string(&self, key: &str) -> String {
        self.raw(key).to_string()
    }

    pub fn rng_seed(&self) -> Result<u64, CliError> {
        self.get("rng-seed")
    }

    pub fn zero_alerts(&self) -> Result<bool, CliError> {
        self.get("zero-alerts")
    }

    pub fn qed_threshold(&self) -> Result<f64, CliError> {
        let t: f64 = self.get("qed-threshold")?;
        if t.is_finite() {
            Ok(t)
        } else {
            Err(CliError::Usage("qed-threshold must be finite".into()))
        }
    }

    pub fn format(&self, input: &Path) -> Result<CorpusFormat, CliError> {
        let result = match self.raw("format") {
            "" => CorpusFormat::from_extension(input),
            name => name.parse(),
        };
        result.map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn model_config(&self, vocab_size: usize) -> Result<ModelConfig, CliError> {
        let config = ModelConfig {
            vocab_size,
            embed_dim: self.get("embed-dim")?,
            attention_dim: self.get("attention-dim")?,
            hidden_dim: self.get("hidden-dim")?,
            window_len: self.get("window-len")?,
            rng_seed: self.rng_seed()?,
        };
        config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(config)
    }

    pub fn train_config(&self) -> Result<TrainConfig, CliError> {
        let holdout_fraction: f64 = self.get("holdout-fraction")?;
        if !(0.0..1.0).contains(&holdout_fraction) {
            return Err(CliError::Usage("holdout-fraction must be in [0, 1)".into()));
        }
        Ok(TrainConfig {
            epochs: self.get("epochs")?,
            batch_size: self.get::<usize>("batch-size")?.max(1),
            holdout_fraction,
            adam: AdamConfig {
                lr: self.get("lr")?,
                ..AdamConfig::default()
            },
        })
    }

    pub fn grow_config(&self) -> Result<GrowConfig, CliError> {
        let temperature: f64 = self.get("temperature")?;
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(CliError::Usage("temperature must be a finite value ≥ 0".into()));
        }
        Ok(GrowConfig {
            temperature,
            max_len: self.get("max-len")?,
        })
    }

    pub fn batch_size(&self) -> Result<usize, CliError> {
        self.get("n")
    }

    pub fn evolve_config(&self) -> Result<EvolveConfig, CliError> {
        Ok(EvolveConfig {
            generations: self.get("generations")?,
            batch_size: self.batch_size()?,
            grow: self.grow_config()?,
            qed_augment_threshold: self.get("qed-augment-threshold")?,
            fine_tune_epochs: self.get("fine-tune-epochs")?,
            min_improvement: self.get("min-improvement")?,
            train: TrainConfig {
                holdout_fraction: 0.0,
                ..self.train_config()?
            },
        })
    }

    pub fn column_map(&self) -> ColumnMap {
        ColumnMap {
            id: self.string("opera-id"),
            logp: self.string("opera-logp"),
            clearance: self.string("opera-clearance"),
            caco2: self.string("opera-caco2"),
        }
    }

    pub fn x_field(&self) -> Result<Field, CliError> {
        self.raw("x-field")
            .parse()
            .map_err(|e: opforge_core::report::ReportError| CliError::Usage(e.to_string()))
    }
}
