use std::collections::{BTreeSet, HashMap};

use super::token::{Token, BOS_TEXT, EOS_TEXT, PAD_TEXT};
use super::SmilesError;

pub const PAD_ID: usize = 0;
pub const BOS_ID: usize = 1;
pub const EOS_ID: usize = 2;

/// Bijection between token texts and integer ids.
///
/// Ids 0, 1 and 2 are always PAD, BOS and EOS; every other token follows in
/// lexicographic order of its text, so the same token set always produces
/// the same ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<Token>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    fn from_sorted(texts: BTreeSet<String>) -> Result<Vocabulary, SmilesError> {
        let mut tokens = vec![Token::pad(), Token::bos(), Token::eos()];
        for text in texts {
            tokens.push(Token::from_text(&text)?);
        }
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.text().to_string(), i))
            .collect();
        Ok(Vocabulary { tokens, index })
    }

    /// Reads back a vocabulary from its token texts in id order, as written
    /// by [`Vocabulary::texts`]. The ordering rule is re-checked.
    pub fn from_texts<S: AsRef<str>>(texts: &[S]) -> Result<Vocabulary, SmilesError> {
        let texts: Vec<&str> = texts.iter().map(AsRef::as_ref).collect();
        if texts.len() < 3 || texts[..3] != [PAD_TEXT, BOS_TEXT, EOS_TEXT] {
            return Err(SmilesError::MalformedVocabulary(
                "first three entries must be <pad>, <bos>, <eos>".into(),
            ));
        }
        let rest: BTreeSet<String> = texts[3..].iter().map(|s| s.to_string()).collect();
        if rest.len() != texts.len() - 3 || rest.iter().map(String::as_str).ne(texts[3..].iter().copied()) {
            return Err(SmilesError::MalformedVocabulary(
                "tokens must be unique and sorted".into(),
            ));
        }
        Vocabulary::from_sorted(rest)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, text: &str) -> Option<usize> {
        self.index.get(text).copied()
    }

    pub fn token(&self, id: usize) -> Option<&Token> {
        self.tokens.get(id)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(Token::text)
    }

    pub fn encode(&self, tokens: &[Token]) -> Result<Vec<usize>, SmilesError> {
        tokens
            .iter()
            .map(|t| {
                self.id(t.text())
                    .ok_or_else(|| SmilesError::TokenNotInVocabulary(t.text().to_string()))
            })
            .collect()
    }

    /// `[BOS] tokens [EOS]` as ids.
    pub fn encode_sequence(&self, tokens: &[Token]) -> Result<Vec<usize>, SmilesError> {
        let mut ids = Vec::with_capacity(tokens.len() + 2);
        ids.push(BOS_ID);
        ids.extend(self.encode(tokens)?);
        ids.push(EOS_ID);
        Ok(ids)
    }

    pub fn decode(&self, ids: &[usize]) -> Option<Vec<Token>> {
        ids.iter().map(|&i| self.token(i).cloned()).collect()
    }
}

/// Collects every distinct token of the corpus into a vocabulary.
pub fn build_vocabulary(corpus: &[Vec<Token>]) -> Result<Vocabulary, SmilesError> {
    if corpus.is_empty() {
        return Err(SmilesError::EmptyCorpus);
    }
    let texts: BTreeSet<String> = corpus
        .iter()
        .flatten()
        .filter(|t| !t.is_special())
        .map(|t| t.text().to_string())
        .collect();
    Vocabulary::from_sorted(texts)
}
