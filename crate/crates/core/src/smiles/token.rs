//! SMILES tokenization.
//!
//! Tokens are chemically aware: two-letter organic-subset elements (`Cl`,
//! `Br`), bracket atoms and `%nn` ring labels are single tokens, so the
//! sequence model never has to learn to spell them.

use std::fmt;

use super::SmilesError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Atom,
    AromaticAtom,
    BracketAtom,
    Bond,
    BranchOpen,
    BranchClose,
    RingBond,
    Special,
}

pub const PAD_TEXT: &str = "<pad>";
pub const BOS_TEXT: &str = "<bos>";
pub const EOS_TEXT: &str = "<eos>";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    text: String,
    kind: TokenKind,
}

impl Token {
    fn new(text: impl Into<String>, kind: TokenKind) -> Token {
        Token {
            text: text.into(),
            kind,
        }
    }

    pub fn pad() -> Token {
        Token::new(PAD_TEXT, TokenKind::Special)
    }

    pub fn bos() -> Token {
        Token::new(BOS_TEXT, TokenKind::Special)
    }

    pub fn eos() -> Token {
        Token::new(EOS_TEXT, TokenKind::Special)
    }

    /// Rebuilds a token from its text, e.g. when reading a stored vocabulary.
    pub fn from_text(text: &str) -> Result<Token, SmilesError> {
        match text {
            PAD_TEXT => return Ok(Token::pad()),
            BOS_TEXT => return Ok(Token::bos()),
            EOS_TEXT => return Ok(Token::eos()),
            _ => {}
        }
        let mut tokens = tokenize(text)?;
        if tokens.len() != 1 {
            return Err(SmilesError::NotASingleToken(text.to_string()));
        }
        Ok(tokens.remove(0))
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn kind(&self) -> TokenKind {
        self.kind
    }

    pub fn is_special(&self) -> bool {
        self.kind == TokenKind::Special
    }

    /// Element symbol carried by an atom token, capitalised (`c` -> `C`,
    /// `[nH]` -> `N`). `None` for non-atom tokens.
    pub fn element_symbol(&self) -> Option<String> {
        match self.kind {
            TokenKind::Atom => Some(self.text.clone()),
            TokenKind::AromaticAtom => Some(capitalise(&self.text)),
            TokenKind::BracketAtom => {
                let inner = self.text.trim_start_matches('[');
                let inner = inner.trim_start_matches(|c: char| c.is_ascii_digit());
                let mut chars = inner.chars();
                let first = chars.next()?;
                let second = chars.next().filter(|c| c.is_ascii_lowercase());
                let mut symbol = first.to_ascii_uppercase().to_string();
                if first.is_ascii_uppercase() {
                    if let Some(c) = second {
                        let two = format!("{first}{c}");
                        if super::Element::from_symbol(&two).is_some() {
                            symbol = two;
                        }
                    }
                } else if let Some(c) = second {
                    // aromatic two-letter symbols: se, as, te
                    let two = format!("{}{c}", first.to_ascii_uppercase());
                    if matches!(two.as_str(), "Se" | "As" | "Te") {
                        symbol = two;
                    }
                }
                Some(symbol)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn capitalise(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

/// Splits a SMILES string into tokens by greedy longest match.
pub fn tokenize(smiles: &str) -> Result<Vec<Token>, SmilesError> {
    let bytes = smiles.as_bytes();
    let mut tokens = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let (len, kind) = match c {
            b'C' if bytes.get(i + 1) == Some(&b'l') => (2, TokenKind::Atom),
            b'B' if bytes.get(i + 1) == Some(&b'r') => (2, TokenKind::Atom),
            b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I' => (1, TokenKind::Atom),
            b'b' | b'c' | b'n' | b'o' | b'p' | b's' => (1, TokenKind::AromaticAtom),
            b'[' => {
                let close = bytes[i + 1..]
                    .iter()
                    .position(|&b| b == b']' || b == b'[')
                    .map(|p| p + i + 1);
                match close {
                    Some(j) if bytes[j] == b']' => (j - i + 1, TokenKind::BracketAtom),
                    _ => return Err(SmilesError::UnterminatedBracket(i)),
                }
            }
            b'-' | b'=' | b'#' | b':' | b'/' | b'\\' | b'.' => (1, TokenKind::Bond),
            b'(' => (1, TokenKind::BranchOpen),
            b')' => (1, TokenKind::BranchClose),
            b'1'..=b'9' => (1, TokenKind::RingBond),
            b'%' => {
                let two_digits = bytes.len() >= i + 3
                    && bytes[i + 1].is_ascii_digit()
                    && bytes[i + 2].is_ascii_digit();
                if !two_digits {
                    return Err(SmilesError::UnknownCharacter(i));
                }
                (3, TokenKind::RingBond)
            }
            _ => return Err(SmilesError::UnknownCharacter(i)),
        };
        // Every accepted byte is ASCII, so byte slicing stays on char boundaries.
        tokens.push(Token::new(&smiles[i..i + len], kind));
        i += len;
    }
    Ok(tokens)
}

/// Concatenates token texts back into a SMILES string.
pub fn detokenize(tokens: &[Token]) -> Result<String, SmilesError> {
    let mut out = String::with_capacity(tokens.len() * 2);
    for token in tokens {
        if token.is_special() {
            return Err(SmilesError::SpecialTokenPresent);
        }
        out.push_str(&token.text);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<String> {
        tokenize(s)
            .unwrap()
            .into_iter()
            .map(|t| t.text)
            .collect()
    }

    #[test]
    fn one_character_tokens() {
        assert_eq!(texts("OP(=O)F"), ["O", "P", "(", "=", "O", ")", "F"]);
    }

    #[test]
    fn two_letter_elements_win() {
        assert_eq!(texts("CCl"), ["C", "Cl"]);
        assert_eq!(texts("BrCBr"), ["Br", "C", "Br"]);
    }

    #[test]
    fn two_digit_ring_label() {
        assert_eq!(texts("C%12CC%12"), ["C", "%12", "C", "C", "%12"]);
    }

    #[test]
    fn bracket_atom_is_one_token() {
        let toks = tokenize("[NH3+]C").unwrap();
        assert_eq!(toks[0].text(), "[NH3+]");
        assert_eq!(toks[0].kind(), TokenKind::BracketAtom);
        assert_eq!(toks[1].text(), "C");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(tokenize("CCX"), Err(SmilesError::UnknownCharacter(2)));
        assert_eq!(tokenize("C[NH4+"), Err(SmilesError::UnterminatedBracket(1)));
        assert_eq!(tokenize("C[N[H]]"), Err(SmilesError::UnterminatedBracket(1)));
        assert_eq!(tokenize("C%1"), Err(SmilesError::UnknownCharacter(1)));
        assert_eq!(tokenize("C0"), Err(SmilesError::UnknownCharacter(1)));
    }

    #[test]
    fn detokenize_rules() {
        assert_eq!(detokenize(&[]).unwrap(), "");
        let sarin = "CC(C)OP(C)(=O)F";
        assert_eq!(detokenize(&tokenize(sarin).unwrap()).unwrap(), sarin);
        assert_eq!(detokenize(&tokenize("CCl").unwrap()[..]).unwrap(), "CCl");
        assert_eq!(
            detokenize(&[Token::bos()]),
            Err(SmilesError::SpecialTokenPresent)
        );
    }

    #[test]
    fn element_symbols() {
        let sym = |s: &str| Token::from_text(s).unwrap().element_symbol();
        assert_eq!(sym("c").as_deref(), Some("C"));
        assert_eq!(sym("[nH]").as_deref(), Some("N"));
        assert_eq!(sym("[13CH3]").as_deref(), Some("C"));
        assert_eq!(sym("[Cl-]").as_deref(), Some("Cl"));
        assert_eq!(sym("[se]").as_deref(), Some("Se"));
        assert_eq!(sym("("), None);
    }
}
