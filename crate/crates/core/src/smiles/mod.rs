//! SMILES grammar: tokens, vocabulary, graph parsing, valence validation and
//! substructure matching.

mod element;
mod graph;
mod matching;
mod parse;
mod token;
mod validate;
mod vocab;

use thiserror::Error;

pub use element::{allowed_valences, fill_valence, Element};
pub use graph::{Atom, Bond, BondOrder, BondTally, MolecularGraph};
pub use matching::{contains_substructure, match_substructure, MAX_PATTERN_ATOMS};
pub use parse::{parse, parse_tokens};
pub use token::{detokenize, tokenize, Token, TokenKind, BOS_TEXT, EOS_TEXT, PAD_TEXT};
pub use validate::{validate, IssueCode, ValidityIssue, ValidityReport};
pub use vocab::{build_vocabulary, Vocabulary, BOS_ID, EOS_ID, PAD_ID};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("unknown character at position {0}")]
    UnknownCharacter(usize),
    #[error("unterminated bracket atom starting at position {0}")]
    UnterminatedBracket(usize),
    #[error("special token in SMILES text")]
    SpecialTokenPresent,
    #[error("{0:?} is not exactly one token")]
    NotASingleToken(String),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("malformed vocabulary: {0}")]
    MalformedVocabulary(String),
    #[error("token {0:?} is not in the vocabulary")]
    TokenNotInVocabulary(String),
    #[error("empty input")]
    EmptyInput,
    #[error("ring bond {0} is never closed")]
    UnmatchedRingBond(u8),
    #[error("unmatched parenthesis")]
    UnmatchedParenthesis,
    #[error("bond symbol at position {0} has no atom on one side")]
    DanglingBond(usize),
    #[error("token at position {0} is not allowed there")]
    MisplacedToken(usize),
    #[error("ring bond {0} has conflicting bond symbols")]
    RingBondConflict(u8),
    #[error("multi-fragment SMILES are not supported")]
    SingleFragmentOnly,
    #[error("invalid bracket atom {0}")]
    InvalidBracketAtom(String),
    #[error("bond joins an atom to itself")]
    SelfLoop,
    #[error("more than one bond between the same pair of atoms")]
    DuplicateBond,
    #[error("bond endpoint out of range")]
    BondOutOfRange,
    #[error("pattern has {0} atoms; at most {max} are supported", max = MAX_PATTERN_ATOMS)]
    PatternTooLarge(usize),
}
