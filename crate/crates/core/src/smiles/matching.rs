use std::collections::HashSet;

use super::graph::MolecularGraph;
use super::SmilesError;

pub const MAX_PATTERN_ATOMS: usize = 24;

/// Counts the distinct target atom sets onto which `pattern` embeds,
/// preserving element, aromaticity and bond order.
///
/// Plain pattern atoms match any charge and hydrogen count; bracket atoms in
/// the pattern also require the same formal charge and total hydrogens.
pub fn match_substructure(
    target: &MolecularGraph,
    pattern: &MolecularGraph,
) -> Result<usize, SmilesError> {
    let mut sets: HashSet<Vec<usize>> = HashSet::new();
    search(target, pattern, &mut |mapping| {
        let mut set = mapping.to_vec();
        set.sort_unstable();
        sets.insert(set);
        true
    })?;
    Ok(sets.len())
}

/// Whether at least one embedding exists.
pub fn contains_substructure(
    target: &MolecularGraph,
    pattern: &MolecularGraph,
) -> Result<bool, SmilesError> {
    let mut found = false;
    search(target, pattern, &mut |_| {
        found = true;
        false
    })?;
    Ok(found)
}

/// Enumerates embeddings, calling `visit` with the target atom of each
/// pattern atom. Stops when `visit` returns false.
fn search(
    target: &MolecularGraph,
    pattern: &MolecularGraph,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<(), SmilesError> {
    let n = pattern.atom_count();
    if n > MAX_PATTERN_ATOMS {
        return Err(SmilesError::PatternTooLarge(n));
    }
    if n == 0 || n > target.atom_count() || pattern.bond_count() > target.bond_count() {
        return Ok(());
    }
    let order = search_order(pattern);
    let compatible: Vec<Vec<usize>> = (0..n)
        .map(|p| {
            (0..target.atom_count())
                .filter(|&t| atom_matches(target, t, pattern, p))
                .collect()
        })
        .collect();
    if compatible.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let mut state = State {
        target,
        pattern,
        order: &order,
        compatible: &compatible,
        mapping: vec![usize::MAX; n],
        used: vec![false; target.atom_count()],
    };
    state.extend(0, visit);
    Ok(())
}

struct State<'a> {
    target: &'a MolecularGraph,
    pattern: &'a MolecularGraph,
    order: &'a [usize],
    compatible: &'a [Vec<usize>],
    mapping: Vec<usize>,
    used: Vec<bool>,
}

impl State<'_> {
    /// Returns false once the visitor asks to stop.
    fn extend(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.mapping);
        }
        let p = self.order[depth];
        // Anchor on an already-mapped neighbour when there is one, so only
        // its target neighbours need trying.
        let anchor = self
            .pattern
            .neighbors(p)
            .iter()
            .find(|&&(q, _)| self.mapping[q] != usize::MAX)
            .map(|&(q, _)| self.mapping[q]);
        let candidates: Vec<usize> = match anchor {
            Some(t) => self.target.neighbors(t).iter().map(|&(u, _)| u).collect(),
            None => self.compatible[p].clone(),
        };
        for t in candidates {
            if self.used[t] || !self.compatible[p].contains(&t) || !self.bonds_agree(p, t) {
                continue;
            }
            self.mapping[p] = t;
            self.used[t] = true;
            let go_on = self.extend(depth + 1, visit);
            self.used[t] = false;
            self.mapping[p] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Every pattern bond from `p` to a mapped atom must exist in the target
    /// with the same order.
    fn bonds_agree(&self, p: usize, t: usize) -> bool {
        self.pattern.neighbors(p).iter().all(|&(q, bi)| {
            let tq = self.mapping[q];
            tq == usize::MAX
                || self
                    .target
                    .bond_between(t, tq)
                    .is_some_and(|b| b.order == self.pattern.bonds()[bi].order)
        })
    }
}

fn atom_matches(target: &MolecularGraph, t: usize, pattern: &MolecularGraph, p: usize) -> bool {
    let (ta, pa) = (target.atom(t), pattern.atom(p));
    if ta.element != pa.element || ta.aromatic != pa.aromatic {
        return false;
    }
    if target.degree(t) < pattern.degree(p) {
        return false;
    }
    !pa.bracket || (ta.charge == pa.charge && target.total_hydrogens(t) == pattern.total_hydrogens(p))
}

/// Breadth-first order over each connected component of the pattern.
fn search_order(pattern: &MolecularGraph) -> Vec<usize> {
    let n = pattern.atom_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let a = order[head];
            head += 1;
            for &(b, _) in pattern.neighbors(a) {
                if !seen[b] {
                    seen[b] = true;
                    order.push(b);
                }
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn count(target: &str, pattern: &str) -> usize {
        match_substructure(&parse(target).unwrap(), &parse(pattern).unwrap()).unwrap()
    }

    #[test]
    fn simple_counts() {
        assert_eq!(count("CCO", "CO"), 1);
        assert_eq!(count("C", "CC"), 0);
        assert_eq!(count("CC(C)OP(C)(=O)F", "OP(=O)F"), 1);
    }

    #[test]
    fn counts_distinct_atom_sets() {
        assert_eq!(count("CCC", "CC"), 2);
        assert_eq!(count("c1ccccc1", "cc"), 6);
        assert_eq!(count("c1ccccc1", "c1ccccc1"), 1);
        assert_eq!(count("CC(C)(C)C", "C(C)(C)C"), 4);
    }

    #[test]
    fn bond_order_and_aromaticity_must_agree() {
        assert_eq!(count("C=CC", "C=C"), 1);
        assert_eq!(count("CCC", "C=C"), 0);
        assert_eq!(count("c1ccccc1", "CC"), 0);
    }

    #[test]
    fn bracket_pattern_atoms_constrain_charge_and_hydrogens() {
        assert_eq!(count("CC(=O)[O-]", "[O-]"), 1);
        assert_eq!(count("CC(=O)O", "[O-]"), 0);
        assert_eq!(count("CC(=O)O", "[OH]"), 1);
        assert_eq!(count("CC(=O)O", "O"), 2);
    }

    #[test]
    fn disconnected_target_components_are_fine() {
        assert_eq!(count("OCCCCO", "O"), 2);
    }

    #[test]
    fn large_patterns_are_rejected() {
        let big = parse(&"C".repeat(25)).unwrap();
        assert_eq!(
            match_substructure(&big, &big),
            Err(SmilesError::PatternTooLarge(25))
        );
        let ok = parse(&"C".repeat(24)).unwrap();
        assert_eq!(match_substructure(&ok, &ok), Ok(1));
    }

    #[test]
    fn contains_stops_early() {
        let t = parse("CCCCCCCCCC").unwrap();
        assert!(contains_substructure(&t, &parse("CC").unwrap()).unwrap());
        assert!(!contains_substructure(&t, &parse("O").unwrap()).unwrap());
    }
}
