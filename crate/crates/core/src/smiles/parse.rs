use std::collections::BTreeMap;

use super::element::Element;
use super::graph::{Atom, Bond, BondOrder, MolecularGraph};
use super::token::{tokenize, Token, TokenKind};
use super::SmilesError;

/// Parses a SMILES string into a molecular graph.
pub fn parse(smiles: &str) -> Result<MolecularGraph, SmilesError> {
    let tokens = tokenize(smiles)?;
    parse_tokens(&tokens)
}

#[derive(Clone, Copy)]
struct PendingBond {
    order: Option<BondOrder>,
    position: usize,
}

/// Parses an already tokenized SMILES string.
pub fn parse_tokens(tokens: &[Token]) -> Result<MolecularGraph, SmilesError> {
    if tokens.is_empty() {
        return Err(SmilesError::EmptyInput);
    }
    let mut atoms: Vec<Atom> = Vec::new();
    let mut bonds: Vec<Bond> = Vec::new();
    let mut prev: Option<usize> = None;
    let mut pending: Option<PendingBond> = None;
    // (atom the branch returns to, whether the branch got an atom yet)
    let mut branches: Vec<(usize, bool)> = Vec::new();
    let mut open_rings: BTreeMap<u8, (usize, Option<BondOrder>)> = BTreeMap::new();
    let mut position = 0usize;

    for token in tokens {
        let text = token.text();
        match token.kind() {
            TokenKind::Atom | TokenKind::AromaticAtom | TokenKind::BracketAtom => {
                let atom = match token.kind() {
                    TokenKind::BracketAtom => parse_bracket(text)?,
                    TokenKind::Atom => Atom::organic(
                        Element::from_symbol(text).expect("tokenizer only emits organic symbols"),
                        false,
                    ),
                    _ => Atom::organic(
                        Element::from_symbol(&text.to_ascii_uppercase())
                            .expect("tokenizer only emits aromatic organic symbols"),
                        true,
                    ),
                };
                let idx = atoms.len();
                atoms.push(atom);
                if let Some(p) = prev {
                    connect(&mut bonds, &atoms, p, idx, pending.and_then(|b| b.order))?;
                } else if let Some(b) = pending {
                    return Err(SmilesError::DanglingBond(b.position));
                }
                if let Some(top) = branches.last_mut() {
                    top.1 = true;
                }
                pending = None;
                prev = Some(idx);
            }
            TokenKind::Bond => {
                let order = match text {
                    "." => return Err(SmilesError::SingleFragmentOnly),
                    "-" | "/" | "\\" => Some(BondOrder::Single),
                    "=" => Some(BondOrder::Double),
                    "#" => Some(BondOrder::Triple),
                    ":" => Some(BondOrder::Aromatic),
                    _ => unreachable!("tokenizer bond set"),
                };
                if prev.is_none() || pending.is_some() {
                    return Err(SmilesError::DanglingBond(position));
                }
                pending = Some(PendingBond { order, position });
            }
            TokenKind::BranchOpen => {
                let Some(p) = prev else {
                    return Err(SmilesError::MisplacedToken(position));
                };
                if let Some(b) = pending {
                    return Err(SmilesError::DanglingBond(b.position));
                }
                branches.push((p, false));
            }
            TokenKind::BranchClose => {
                if let Some(b) = pending {
                    return Err(SmilesError::DanglingBond(b.position));
                }
                let (atom, had_atom) = branches.pop().ok_or(SmilesError::UnmatchedParenthesis)?;
                if !had_atom {
                    return Err(SmilesError::MisplacedToken(position));
                }
                prev = Some(atom);
            }
            TokenKind::RingBond => {
                let Some(p) = prev else {
                    return Err(SmilesError::MisplacedToken(position));
                };
                let label: u8 = text.trim_start_matches('%').parse().expect("digits");
                let here = pending.take().and_then(|b| b.order);
                match open_rings.remove(&label) {
                    Some((other, there)) => {
                        let order = match (here, there) {
                            (Some(x), Some(y)) if x != y => {
                                return Err(SmilesError::RingBondConflict(label))
                            }
                            (x, y) => x.or(y),
                        };
                        connect(&mut bonds, &atoms, other, p, order)?;
                    }
                    None => {
                        open_rings.insert(label, (p, here));
                    }
                }
            }
            TokenKind::Special => return Err(SmilesError::SpecialTokenPresent),
        }
        position += text.len();
    }

    if let Some(b) = pending {
        return Err(SmilesError::DanglingBond(b.position));
    }
    if !branches.is_empty() {
        return Err(SmilesError::UnmatchedParenthesis);
    }
    if let Some((&label, _)) = open_rings.iter().next() {
        return Err(SmilesError::UnmatchedRingBond(label));
    }
    fold_hydrogens(&mut atoms, &mut bonds);
    MolecularGraph::new(atoms, bonds)
}

fn connect(
    bonds: &mut Vec<Bond>,
    atoms: &[Atom],
    a: usize,
    b: usize,
    order: Option<BondOrder>,
) -> Result<(), SmilesError> {
    if a == b {
        return Err(SmilesError::SelfLoop);
    }
    if bonds
        .iter()
        .any(|x| (x.a == a && x.b == b) || (x.a == b && x.b == a))
    {
        return Err(SmilesError::DuplicateBond);
    }
    let order = order.unwrap_or(if atoms[a].aromatic && atoms[b].aromatic {
        BondOrder::Aromatic
    } else {
        BondOrder::Single
    });
    bonds.push(Bond { a, b, order });
    Ok(())
}

/// Removes neutral `[H]` atoms hanging off a heavy atom by a single bond,
/// crediting the hydrogen to that atom.
fn fold_hydrogens(atoms: &mut Vec<Atom>, bonds: &mut Vec<Bond>) {
    let is_plain_h = |a: &Atom| a.element == Element::H && a.charge == 0 && a.explicit_hydrogens == 0;
    let mut remove = vec![false; atoms.len()];
    for (i, atom) in atoms.iter().enumerate() {
        if !is_plain_h(atom) {
            continue;
        }
        let incident: Vec<&Bond> = bonds.iter().filter(|b| b.a == i || b.b == i).collect();
        if let [bond] = incident.as_slice() {
            let other = bond.other(i);
            if bond.order == BondOrder::Single && atoms[other].element != Element::H {
                remove[i] = true;
            }
        }
    }
    if !remove.iter().any(|&r| r) {
        return;
    }
    for bond in bonds.iter() {
        for (h, heavy) in [(bond.a, bond.b), (bond.b, bond.a)] {
            if remove[h] && atoms[heavy].bracket {
                atoms[heavy].explicit_hydrogens += 1;
            }
        }
    }
    let mut new_index = vec![usize::MAX; atoms.len()];
    let mut next = 0;
    for (i, &r) in remove.iter().enumerate() {
        if !r {
            new_index[i] = next;
            next += 1;
        }
    }
    bonds.retain(|b| !remove[b.a] && !remove[b.b]);
    for b in bonds.iter_mut() {
        b.a = new_index[b.a];
        b.b = new_index[b.b];
    }
    let mut i = 0;
    atoms.retain(|_| {
        let keep = !remove[i];
        i += 1;
        keep
    });
}

/// Parses `[isotope? symbol chirality? hcount? charge? class?]`.
fn parse_bracket(text: &str) -> Result<Atom, SmilesError> {
    let invalid = || SmilesError::InvalidBracketAtom(text.to_string());
    let inner = text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(invalid)?;
    let b = inner.as_bytes();
    let mut i = 0;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }

    let (element, aromatic) = {
        let rest = &inner[i..];
        let first = *b.get(i).ok_or_else(invalid)?;
        if first.is_ascii_uppercase() {
            let two = rest.get(..2).filter(|s| s.as_bytes()[1].is_ascii_lowercase());
            match two.and_then(Element::from_symbol) {
                Some(el) => {
                    i += 2;
                    (el, false)
                }
                None => {
                    i += 1;
                    (Element::from_symbol(&rest[..1]).ok_or_else(invalid)?, false)
                }
            }
        } else if first.is_ascii_lowercase() {
            let two = rest.get(..2);
            if let Some(sym @ ("se" | "as" | "te")) = two {
                i += 2;
                let el = Element::from_symbol(&(sym[..1].to_ascii_uppercase() + &sym[1..]))
                    .ok_or_else(invalid)?;
                (el, true)
            } else {
                let el = match first {
                    b'b' => Element::B,
                    b'c' => Element::C,
                    b'n' => Element::N,
                    b'o' => Element::O,
                    b'p' => Element::P,
                    b's' => Element::S,
                    _ => return Err(invalid()),
                };
                i += 1;
                (el, true)
            }
        } else {
            return Err(invalid());
        }
    };

    // chirality: @, @@, or @ followed by a class tag such as TH1 / SP2 / OH15
    if b.get(i) == Some(&b'@') {
        i += 1;
        if b.get(i) == Some(&b'@') {
            i += 1;
        } else if i + 1 < b.len()
            && b[i].is_ascii_uppercase()
            && b[i + 1].is_ascii_uppercase()
            && &inner[i..i + 2] != "H+"
        {
            i += 2;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }
    }

    let mut hydrogens = 0u8;
    if b.get(i) == Some(&b'H') {
        i += 1;
        hydrogens = 1;
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            hydrogens = inner[start..i].parse().map_err(|_| invalid())?;
        }
    }

    let mut charge: i32 = 0;
    if let Some(&sign @ (b'+' | b'-')) = b.get(i) {
        let unit = if sign == b'+' { 1 } else { -1 };
        i += 1;
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            charge = unit * inner[start..i].parse::<i32>().map_err(|_| invalid())?;
        } else {
            charge = unit;
            while b.get(i) == Some(&sign) {
                charge += unit;
                i += 1;
            }
        }
    }
    if !(-8..=8).contains(&charge) {
        return Err(invalid());
    }

    if b.get(i) == Some(&b':') {
        i += 1;
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return Err(invalid());
        }
    }
    if i != b.len() {
        return Err(invalid());
    }
    Ok(Atom {
        element,
        charge: charge as i8,
        aromatic,
        explicit_hydrogens: hydrogens,
        bracket: true,
    })
}
