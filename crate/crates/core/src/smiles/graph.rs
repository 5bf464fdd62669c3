use super::element::{allowed_valences, fill_valence, Element};
use super::SmilesError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    pub aromatic: bool,
    /// Hydrogens written explicitly inside a bracket atom.
    pub explicit_hydrogens: u8,
    /// Bracket atoms never receive implicit hydrogens.
    pub bracket: bool,
}

impl Atom {
    pub fn organic(element: Element, aromatic: bool) -> Atom {
        Atom {
            element,
            charge: 0,
            aromatic,
            explicit_hydrogens: 0,
            bracket: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Integer order; aromatic bonds report 1 and are handled separately.
    pub fn integral(self) -> u32 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

/// Atoms and bonds of a single molecule with hydrogens folded into their
/// heavy atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularGraph {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// Per atom: (neighbour, bond index).
    adjacency: Vec<Vec<(usize, usize)>>,
    implicit_hydrogens: Vec<u8>,
}

/// Bond-order bookkeeping for one atom.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BondTally {
    pub single: u32,
    pub double: u32,
    pub triple: u32,
    pub aromatic: u32,
}

impl BondTally {
    pub fn non_aromatic_sum(&self) -> u32 {
        self.single + 2 * self.double + 3 * self.triple
    }

    pub fn degree(&self) -> u32 {
        self.single + self.double + self.triple + self.aromatic
    }
}

impl MolecularGraph {
    pub fn new(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<MolecularGraph, SmilesError> {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, bond) in bonds.iter().enumerate() {
            if bond.a >= atoms.len() || bond.b >= atoms.len() {
                return Err(SmilesError::BondOutOfRange);
            }
            if bond.a == bond.b {
                return Err(SmilesError::SelfLoop);
            }
            if adjacency[bond.a].iter().any(|&(n, _)| n == bond.b) {
                return Err(SmilesError::DuplicateBond);
            }
            adjacency[bond.a].push((bond.b, i));
            adjacency[bond.b].push((bond.a, i));
        }
        let mut graph = MolecularGraph {
            atoms,
            bonds,
            adjacency,
            implicit_hydrogens: Vec::new(),
        };
        graph.implicit_hydrogens = (0..graph.atoms.len())
            .map(|i| graph.compute_implicit_hydrogens(i))
            .collect();
        Ok(graph)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// (neighbour, bond index) pairs of atom `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&Bond> {
        self.adjacency[a]
            .iter()
            .find(|&&(n, _)| n == b)
            .map(|&(_, bi)| &self.bonds[bi])
    }

    pub fn tally(&self, i: usize) -> BondTally {
        let mut t = BondTally::default();
        for &(_, bi) in &self.adjacency[i] {
            match self.bonds[bi].order {
                BondOrder::Single => t.single += 1,
                BondOrder::Double => t.double += 1,
                BondOrder::Triple => t.triple += 1,
                BondOrder::Aromatic => t.aromatic += 1,
            }
        }
        t
    }

    pub fn implicit_hydrogens(&self, i: usize) -> u8 {
        self.implicit_hydrogens[i]
    }

    pub fn total_hydrogens(&self, i: usize) -> u32 {
        self.atoms[i].explicit_hydrogens as u32 + self.implicit_hydrogens[i] as u32
    }

    /// Whether an aromatic atom is expected to carry one of the ring's
    /// double bonds when the ring is written in Kekulé form.
    ///
    /// Aromatic carbon always does, unless it already has an exocyclic
    /// double bond (as in `O=c1cccc[nH]1`). Aromatic nitrogen-group atoms
    /// are pyridine-like when cationic or when they have two ring bonds and
    /// no hydrogen; otherwise (`[nH]`, N-substituted, anionic) they donate a
    /// lone pair, as do aromatic oxygen and sulfur.
    pub fn aromatic_pi_bond(&self, i: usize) -> u32 {
        let atom = &self.atoms[i];
        if !atom.aromatic {
            return 0;
        }
        let t = self.tally(i);
        if t.aromatic == 0 {
            return 0;
        }
        let el = atom.element;
        if el == Element::C {
            u32::from(t.double == 0)
        } else if matches!(el.atomic_number(), 5 | 7 | 15 | 33) {
            let pyridine_like = t.double == 0
                && atom.charge >= 0
                && (atom.charge > 0 || (atom.explicit_hydrogens == 0 && t.degree() == 2));
            u32::from(pyridine_like)
        } else {
            0
        }
    }

    /// Sum of bond orders with aromatic bonds resolved to their Kekulé
    /// contribution (one each, plus one for an atom that takes a ring
    /// double bond).
    pub fn bond_order_sum(&self, i: usize) -> u32 {
        let t = self.tally(i);
        t.non_aromatic_sum() + t.aromatic + self.aromatic_pi_bond(i)
    }

    fn compute_implicit_hydrogens(&self, i: usize) -> u8 {
        let atom = &self.atoms[i];
        if atom.bracket {
            return 0;
        }
        let Some(valences) = allowed_valences(atom.element, atom.charge) else {
            return 0;
        };
        let used = self.bond_order_sum(i);
        fill_valence(valences, used)
            .map(|v| (v - used) as u8)
            .unwrap_or(0)
    }

    /// The same molecule with atom `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> MolecularGraph {
        assert_eq!(perm.len(), self.atoms.len());
        let mut atoms = self.atoms.clone();
        for (old, &new) in perm.iter().enumerate() {
            atoms[new] = self.atoms[old];
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                a: perm[b.a],
                b: perm[b.b],
                order: b.order,
            })
            .collect();
        MolecularGraph::new(atoms, bonds).expect("permutation preserves graph invariants")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_are_enforced() {
        let c = Atom::organic(Element::C, false);
        let single = |a, b| Bond {
            a,
            b,
            order: BondOrder::Single,
        };
        assert_eq!(
            MolecularGraph::new(vec![c], vec![single(0, 0)]),
            Err(SmilesError::SelfLoop)
        );
        assert_eq!(
            MolecularGraph::new(vec![c, c], vec![single(0, 1), single(1, 0)]),
            Err(SmilesError::DuplicateBond)
        );
        assert_eq!(
            MolecularGraph::new(vec![c], vec![single(0, 3)]),
            Err(SmilesError::BondOutOfRange)
        );
    }

    #[test]
    fn implicit_hydrogens_fill_lowest_valence() {
        let c = Atom::organic(Element::C, false);
        let g = MolecularGraph::new(vec![c], vec![]).unwrap();
        assert_eq!(g.total_hydrogens(0), 4);
        let p = Atom::organic(Element::P, false);
        let o = Atom::organic(Element::O, false);
        let g = MolecularGraph::new(
            vec![p, o],
            vec![Bond {
                a: 0,
                b: 1,
                order: BondOrder::Double,
            }],
        )
        .unwrap();
        assert_eq!(g.total_hydrogens(0), 1);
        assert_eq!(g.total_hydrogens(1), 0);
    }
}
