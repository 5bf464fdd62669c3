use rand::Rng;

use super::model::Model;
use super::PipelineError;
use crate::neural::{forward_into, sample_next, ForwardTrace};
use crate::properties::{descriptors, qed, DescriptorVector, PropertyTables};
use crate::scalar::Scalar;
use crate::smiles::{
    contains_substructure, parse, parse_tokens, tokenize, validate, MolecularGraph, Token, BOS_ID,
    EOS_ID, PAD_ID,
};

pub const DEFAULT_SEED: &str = "COP(=O)(F)";

/// Elements every seed must contain.
pub const REQUIRED_ELEMENTS: [&str; 4] = ["P", "F", "O", "C"];

/// A checked growth seed and the fragment every grown molecule must contain.
#[derive(Debug, Clone)]
pub struct Seed {
    text: String,
    tokens: Vec<Token>,
    fragment: MolecularGraph,
}

impl Seed {
    /// Tokenizes `text`, checks for the required elements and parses its
    /// longest graph-parseable token prefix as the fragment pattern.
    pub fn new(text: &str) -> Result<Seed, PipelineError> {
        let tokens = tokenize(text).map_err(PipelineError::SeedUntokenizable)?;
        let present: Vec<String> = tokens.iter().filter_map(Token::element_symbol).collect();
        let missing: Vec<&str> = REQUIRED_ELEMENTS
            .into_iter()
            .filter(|e| !present.iter().any(|p| p == e))
            .collect();
        if !missing.is_empty() {
            return Err(PipelineError::SeedMissingRequiredElements(missing.join(",")));
        }
        let fragment = (1..=tokens.len())
            .rev()
            .find_map(|n| parse_tokens(&tokens[..n]).ok())
            .ok_or_else(|| PipelineError::SeedUnparseable(text.to_string()))?;
        Ok(Seed {
            text: text.to_string(),
            tokens,
            fragment,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn fragment(&self) -> &MolecularGraph {
        &self.fragment
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowConfig {
    pub temperature: f64,
    /// Cap on tokens in the output, seed included.
    pub max_len: usize,
}

impl Default for GrowConfig {
    fn default() -> Self {
        GrowConfig {
            temperature: 1.0,
            max_len: 100,
        }
    }
}

/// One grown molecule. Fragment and score fields are `None` when invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Row within its generation's batch.
    pub index: usize,
    pub smiles: String,
    pub valid: bool,
    pub contains_fragment: Option<bool>,
    /// Tokens in `smiles`.
    pub length: usize,
    pub descriptors: Option<DescriptorVector>,
    pub qed: Option<f64>,
}

impl GenerationRecord {
    /// Join key `gen{generation}-{index}`.
    pub fn id(&self) -> String {
        format!("gen{}-{}", self.generation, self.index)
    }

    /// Parses and scores `smiles`; invalid strings keep only text and length.
    pub fn scored(
        generation: usize,
        index: usize,
        smiles: String,
        length: usize,
        fragment: &MolecularGraph,
        tables: &PropertyTables,
    ) -> GenerationRecord {
        let mut record = GenerationRecord {
            generation,
            index,
            smiles,
            valid: false,
            contains_fragment: None,
            length,
            descriptors: None,
            qed: None,
        };
        let Ok(graph) = parse(&record.smiles) else {
            return record;
        };
        if !validate(&graph).valid() {
            return record;
        }
        let Ok(d) = descriptors(&graph, tables) else {
            return record;
        };
        record.valid = true;
        record.contains_fragment = Some(contains_substructure(&graph, fragment).unwrap_or(false));
        record.qed = Some(qed(&d, tables));
        record.descriptors = Some(d);
        record
    }
}

/// Extends the seed one sampled token at a time until EOS or `max_len`
/// tokens. PAD and BOS are never sampled.
pub fn grow<T: Scalar, R: Rng + ?Sized>(
    seed: &Seed,
    model: &Model<T>,
    cfg: &GrowConfig,
    tables: &PropertyTables,
    rng: &mut R,
) -> Result<GenerationRecord, PipelineError> {
    let seed_ids = model.vocab.encode(seed.tokens())?;
    if cfg.max_len <= seed_ids.len() {
        return Err(PipelineError::SeedTooLong {
            seed: seed_ids.len(),
            max_len: cfg.max_len,
        });
    }
    let (smiles, length) = extend(model, &seed_ids, seed.text(), cfg, rng)?;
    Ok(GenerationRecord::scored(1, 0, smiles, length, seed.fragment(), tables))
}

/// Samples a whole string from BOS with no seed. Returns the text and its
/// token count.
pub fn sample_unseeded<T: Scalar, R: Rng + ?Sized>(
    model: &Model<T>,
    cfg: &GrowConfig,
    rng: &mut R,
) -> Result<(String, usize), PipelineError> {
    extend(model, &[], "", cfg, rng)
}

fn extend<T: Scalar, R: Rng + ?Sized>(
    model: &Model<T>,
    prefix_ids: &[usize],
    prefix_text: &str,
    cfg: &GrowConfig,
    rng: &mut R,
) -> Result<(String, usize), PipelineError> {
    let l = model.config.window_len;
    let mut history = vec![PAD_ID; l];
    history.push(BOS_ID);
    history.extend(prefix_ids);
    let mut trace = ForwardTrace::new(&model.params, l);
    let mut probs = Vec::with_capacity(model.vocab.len());
    let mut smiles = prefix_text.to_string();
    let mut length = prefix_ids.len();
    while length < cfg.max_len {
        forward_into(&history[history.len() - l..], &model.params, &mut trace)?;
        probs.clear();
        probs.extend(trace.probs().iter().map(|p| p.as_f64()));
        probs[PAD_ID] = 0.0;
        probs[BOS_ID] = 0.0;
        let next = sample_next(&probs, cfg.temperature, rng)?;
        if next == EOS_ID {
            break;
        }
        smiles.push_str(model.vocab.token(next).expect("sampled id is in range").text());
        history.push(next);
        length += 1;
    }
    Ok((smiles, length))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_requires_elements() {
        let err = Seed::new("CCO").unwrap_err();
        assert!(matches!(err, PipelineError::SeedMissingRequiredElements(ref m) if m == "P,F"));
        assert!(matches!(Seed::new("C?"), Err(PipelineError::SeedUntokenizable(_))));
    }

    #[test]
    fn default_seed_fragment() {
        let s = Seed::new(DEFAULT_SEED).unwrap();
        assert_eq!(s.fragment().atom_count(), 5);
        assert_eq!(s.text(), "COP(=O)(F)");
    }

    #[test]
    fn open_branch_seed_uses_parseable_prefix() {
        let s = Seed::new("COP(=O)(F").unwrap();
        assert_eq!(s.fragment().atom_count(), 4);
    }

    #[test]
    fn invalid_record_has_no_scores() {
        let frag = Seed::new(DEFAULT_SEED).unwrap().fragment;
        let r = GenerationRecord::scored(2, 7, "COP(=O)(F)C(".into(), 6, &frag, PropertyTables::builtin());
        assert!(!r.valid && r.qed.is_none() && r.contains_fragment.is_none());
        assert_eq!(r.id(), "gen2-7");
        let r = GenerationRecord::scored(1, 0, "COP(=O)(F)OC".into(), 9, &frag, PropertyTables::builtin());
        assert!(r.valid);
        assert_eq!(r.contains_fragment, Some(true));
    }
}
