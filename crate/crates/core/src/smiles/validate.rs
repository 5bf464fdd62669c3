use std::fmt;

use super::element::allowed_valences;
use super::graph::{BondOrder, MolecularGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IssueCode {
    /// Bond orders plus hydrogens exceed every allowed valence.
    ValenceExceeded,
    /// An aromatic atom that is not part of an aromatic ring.
    AromaticNotInRing,
    /// The aromatic system admits no alternating single/double assignment.
    AromaticNotKekulizable,
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IssueCode::ValenceExceeded => "ValenceExceeded",
            IssueCode::AromaticNotInRing => "AromaticNotInRing",
            IssueCode::AromaticNotKekulizable => "AromaticNotKekulizable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityIssue {
    pub code: IssueCode,
    pub atom: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    pub errors: Vec<ValidityIssue>,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks every atom against its allowed valences and the aromatic system
/// for a consistent Kekulé assignment.
pub fn validate(graph: &MolecularGraph) -> ValidityReport {
    let mut errors = Vec::new();
    for (i, atom) in graph.atoms().iter().enumerate() {
        if atom.aromatic && graph.tally(i).aromatic < 2 {
            errors.push(ValidityIssue {
                code: IssueCode::AromaticNotInRing,
                atom: i,
                message: format!("aromatic {} outside an aromatic ring", atom.element),
            });
        }
        let Some(valences) = allowed_valences(atom.element, atom.charge) else {
            continue;
        };
        let total = graph.bond_order_sum(i) + graph.total_hydrogens(i);
        let max = valences.iter().copied().max().unwrap_or(0) as u32;
        if total > max {
            errors.push(ValidityIssue {
                code: IssueCode::ValenceExceeded,
                atom: i,
                message: format!(
                    "{}{} has valence {total}, allowed {valences:?}",
                    atom.element,
                    charge_suffix(atom.charge)
                ),
            });
        }
    }
    if let Some(atom) = unmatched_pi_atom(graph) {
        errors.push(ValidityIssue {
            code: IssueCode::AromaticNotKekulizable,
            atom,
            message: "aromatic system cannot be kekulized".into(),
        });
    }
    ValidityReport { errors }
}

fn charge_suffix(charge: i8) -> String {
    match charge {
        0 => String::new(),
        c if c > 0 => format!("{c:+}"),
        c => c.to_string(),
    }
}

/// Every aromatic atom that needs a ring double bond must be paired with an
/// aromatic neighbour that needs one too. Returns an atom left unpaired by
/// the best assignment, if any.
fn unmatched_pi_atom(graph: &MolecularGraph) -> Option<usize> {
    let n = graph.atom_count();
    let needs: Vec<bool> = (0..n).map(|i| graph.aromatic_pi_bond(i) == 1).collect();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            if !needs[i] {
                return Vec::new();
            }
            graph
                .neighbors(i)
                .iter()
                .filter(|&&(j, b)| needs[j] && graph.bonds()[b].order == BondOrder::Aromatic)
                .map(|&(j, _)| j)
                .collect()
        })
        .collect();
    let mut mate = vec![usize::MAX; n];
    let mut budget = 100_000usize;
    if perfect_matching(&adj, &needs, &mut mate, 0, &mut budget) {
        None
    } else {
        (0..n).find(|&i| needs[i] && mate[i] == usize::MAX).or(Some(0))
    }
}

fn perfect_matching(
    adj: &[Vec<usize>],
    needs: &[bool],
    mate: &mut [usize],
    from: usize,
    budget: &mut usize,
) -> bool {
    let Some(i) = (from..needs.len()).find(|&i| needs[i] && mate[i] == usize::MAX) else {
        return true;
    };
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    for &j in &adj[i] {
        if mate[j] == usize::MAX {
            mate[i] = j;
            mate[j] = i;
            if perfect_matching(adj, needs, mate, i + 1, budget) {
                return true;
            }
            mate[i] = usize::MAX;
            mate[j] = usize::MAX;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn codes(s: &str) -> Vec<IssueCode> {
        validate(&parse(s).unwrap())
            .errors
            .into_iter()
            .map(|e| e.code)
            .collect()
    }

    #[test]
    fn pentavalent_phosphorus_is_valid() {
        assert!(validate(&parse("O=P(F)(OC)C").unwrap()).valid());
    }

    #[test]
    fn trivalent_fluorine_is_invalid() {
        let report = validate(&parse("F(F)F").unwrap());
        assert!(!report.valid());
        assert_eq!(report.errors[0].code, IssueCode::ValenceExceeded);
        assert_eq!(report.errors[0].atom, 0);
    }

    #[test]
    fn ammonium_is_valid() {
        assert!(codes("[NH4+]").is_empty());
        assert_eq!(codes("[NH4]"), [IssueCode::ValenceExceeded]);
    }

    #[test]
    fn common_aromatics_are_valid() {
        for s in [
            "c1ccccc1",
            "c1ccoc1",
            "c1cc[nH]c1",
            "Cn1cccc1",
            "c1ccncc1",
            "c1ccc2ccccc2c1",
            "O=c1cccc[nH]1",
            "c1ccc2[nH]ccc2c1",
            "c1ncc2nc[nH]c2n1",
            "C[n+]1ccccc1",
            "c1ccsc1",
            "O=[N+]([O-])c1ccccc1",
        ] {
            assert!(codes(s).is_empty(), "{s}: {:?}", codes(s));
        }
    }

    #[test]
    fn broken_aromatics_are_invalid() {
        assert_eq!(codes("c1cccc1"), [IssueCode::AromaticNotKekulizable]);
        assert_eq!(codes("c1ccnc1"), [IssueCode::AromaticNotKekulizable]);
        assert!(codes("Cc").contains(&IssueCode::AromaticNotInRing));
    }

    #[test]
    fn overbonded_carbon() {
        assert_eq!(codes("C(C)(C)(C)(C)C"), [IssueCode::ValenceExceeded]);
        assert_eq!(codes("C=C=C=C"), Vec::<IssueCode>::new());
        assert_eq!(codes("CC(=O)(=O)C"), [IssueCode::ValenceExceeded]);
    }
}
