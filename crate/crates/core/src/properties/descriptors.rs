use super::crippen::crippen_contributions;
use super::rings::RingInfo;
use super::tables::PropertyTables;
use super::tpsa::tpsa;
use super::PropertyError;
use crate::smiles::{contains_substructure, BondOrder, Element, MolecularGraph};

/// Descriptor names in vector order.
pub const DESCRIPTOR_NAMES: [&str; 8] =
    ["MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS"];

/// The eight QED descriptors of one molecule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptorVector {
    /// Molecular weight, g/mol.
    pub mw: f64,
    /// Wildman–Crippen logP.
    pub alogp: f64,
    pub hba: u32,
    pub hbd: u32,
    /// Topological polar surface area, Å².
    pub psa: f64,
    pub rotb: u32,
    pub arom: u32,
    pub alerts: u32,
}

impl DescriptorVector {
    /// Values in [`DESCRIPTOR_NAMES`] order.
    pub fn values(&self) -> [f64; 8] {
        [
            self.mw,
            self.alogp,
            self.hba as f64,
            self.hbd as f64,
            self.psa,
            self.rotb as f64,
            self.arom as f64,
            self.alerts as f64,
        ]
    }

    /// The same vector with the alert count set to zero.
    pub fn without_alerts(self) -> DescriptorVector {
        DescriptorVector { alerts: 0, ..self }
    }
}

/// Computes all eight descriptors. The graph is expected to have passed
/// validation.
pub fn descriptors(
    graph: &MolecularGraph,
    tables: &PropertyTables,
) -> Result<DescriptorVector, PropertyError> {
    let rings = RingInfo::new(graph);
    Ok(DescriptorVector {
        mw: molecular_weight(graph, tables)?,
        alogp: crippen_contributions(graph, tables)?.iter().sum(),
        hba: hydrogen_bond_acceptors(graph),
        hbd: hydrogen_bond_donors(graph),
        psa: tpsa(graph, tables),
        rotb: rotatable_bonds_with(graph, &rings),
        arom: aromatic_ring_count_with(graph, &rings),
        alerts: structural_alerts(graph, tables),
    })
}

/// Sum of atomic weights, hydrogens included.
pub fn molecular_weight(
    graph: &MolecularGraph,
    tables: &PropertyTables,
) -> Result<f64, PropertyError> {
    let h = tables.atomic_weight(Element::H)?;
    let mut mw = 0.0;
    for (i, atom) in graph.atoms().iter().enumerate() {
        mw += tables.atomic_weight(atom.element)? + h * graph.total_hydrogens(i) as f64;
    }
    Ok(mw)
}

struct View<'a> {
    g: &'a MolecularGraph,
}

impl View<'_> {
    fn z(&self, i: usize) -> u8 {
        self.g.atom(i).element.atomic_number()
    }

    fn aliphatic(&self, i: usize, z: u8) -> bool {
        self.z(i) == z && !self.g.atom(i).aromatic
    }

    fn charge(&self, i: usize) -> i8 {
        self.g.atom(i).charge
    }

    fn h(&self, i: usize) -> u32 {
        self.g.total_hydrogens(i)
    }

    /// Heavy-atom degree.
    fn degree(&self, i: usize) -> usize {
        self.g.neighbors(i).iter().filter(|&&(j, _)| self.z(j) != 1).count()
    }

    /// Connections including hydrogens.
    fn connections(&self, i: usize) -> u32 {
        self.g.degree(i) as u32 + self.h(i)
    }

    fn valence(&self, i: usize) -> u32 {
        self.g.bond_order_sum(i) + self.h(i)
    }

    fn bonds(&self, i: usize) -> impl Iterator<Item = (usize, usize, BondOrder)> + '_ {
        self.g
            .neighbors(i)
            .iter()
            .map(|&(j, b)| (j, b, self.g.bonds()[b].order))
    }
}

/// Acceptor count: aromatic O and N without hydrogens, divalent O and S,
/// carbonyl-type O and S, their anions, nitrile N, and neutral trivalent N
/// that is not an amide or sulfonamide nitrogen.
pub fn hydrogen_bond_acceptors(graph: &MolecularGraph) -> u32 {
    let v = View { g: graph };
    (0..graph.atom_count())
        .filter(|&i| {
            let atom = graph.atom(i);
            let (h, x, q) = (v.h(i), v.connections(i), atom.charge);
            let val = v.valence(i);
            match (atom.element.atomic_number(), atom.aromatic) {
                (8, true) => h == 0 && x == 2,
                (7, true) => h == 0 && x == 2,
                (8, false) => {
                    (h == 1 && x == 2 && val == 2)
                        || (h == 0 && x == 2 && val == 2)
                        || (h == 0 && x == 1 && val == 2)
                        || (q == -1 && x == 1)
                }
                (16, false) => {
                    (h == 0 && (x == 2 || x == 1) && val == 2) || (q == -1 && x == 1)
                }
                (7, false) => {
                    (h == 0 && x == 1 && val == 3)
                        || (q == 0 && x == 3 && val == 3 && !is_amide_like_nitrogen(&v, i))
                }
                _ => false,
            }
        })
        .count() as u32
}

/// `N[C,S]=O`: nitrogen bonded to a C or S carrying a double-bonded O.
fn is_amide_like_nitrogen(v: &View, n: usize) -> bool {
    v.bonds(n).any(|(j, _, order)| {
        matches!(order, BondOrder::Single | BondOrder::Aromatic)
            && (v.aliphatic(j, 6) || v.aliphatic(j, 16))
            && v
                .bonds(j)
                .any(|(k, _, o)| o == BondOrder::Double && v.aliphatic(k, 8))
    })
}

/// Donor count: N–H with normal valence (neutral, or cationic and
/// four-valent), neutral O–H and S–H with one hydrogen, and neutral
/// aromatic N–H.
pub fn hydrogen_bond_donors(graph: &MolecularGraph) -> u32 {
    let v = View { g: graph };
    (0..graph.atom_count())
        .filter(|&i| {
            let atom = graph.atom(i);
            let (h, q, val) = (v.h(i), atom.charge, v.valence(i));
            match (atom.element.atomic_number(), atom.aromatic) {
                (7, false) => h > 0 && (val == 3 || (q == 1 && val == 4)),
                (8, false) | (16, false) => h == 1 && q == 0,
                (7, true) => h == 1 && q == 0,
                _ => false,
            }
        })
        .count() as u32
}

/// Strict rotatable-bond count: acyclic single bonds between non-terminal
/// heavy atoms, excluding bonds to triple-bonded atoms, CX3 and tert-butyl
/// centres, and amide, ester, thioamide and amidinium C–X bonds.
pub fn rotatable_bonds(graph: &MolecularGraph) -> u32 {
    rotatable_bonds_with(graph, &RingInfo::new(graph))
}

fn rotatable_bonds_with(graph: &MolecularGraph, rings: &RingInfo) -> u32 {
    let v = View { g: graph };
    let reduced: Vec<bool> = (0..graph.atom_count()).map(|i| rotor_end(&v, i)).collect();
    let full: Vec<bool> = (0..graph.atom_count())
        .map(|i| reduced[i] && !in_amide_like_bond(&v, rings, i))
        .collect();
    graph
        .bonds()
        .iter()
        .enumerate()
        .filter(|&(b, bond)| {
            matches!(bond.order, BondOrder::Single | BondOrder::Aromatic)
                && !rings.is_ring_bond(b)
                && ((full[bond.a] && reduced[bond.b]) || (full[bond.b] && reduced[bond.a]))
        })
        .count() as u32
}

/// Conditions every rotatable-bond endpoint must meet.
fn rotor_end(v: &View, i: usize) -> bool {
    if v.z(i) == 1 || v.degree(i) == 1 {
        return false;
    }
    if v.bonds(i).any(|(_, _, o)| o == BondOrder::Triple) {
        return false;
    }
    if v.aliphatic(i, 6) {
        let count = |pred: &dyn Fn(usize) -> bool| {
            v.bonds(i)
                .filter(|&(j, _, o)| matches!(o, BondOrder::Single | BondOrder::Aromatic) && pred(j))
                .count()
        };
        for halogen in [9, 17, 35] {
            if count(&|j| v.z(j) == halogen) >= 3 {
                return false;
            }
        }
        if count(&|j| v.aliphatic(j, 6) && v.h(j) == 3) >= 3 {
            return false;
        }
    }
    true
}

/// Whether `i` is the carbon or heteroatom of an acyclic amide-like bond
/// (`C(=X)-Y` with X, Y in N, O, S, or an amidinium `C(=N+)-N`).
fn in_amide_like_bond(v: &View, rings: &RingInfo, i: usize) -> bool {
    let is_nos = |j: usize| v.z(j) == 7 || v.aliphatic(j, 8) || (v.aliphatic(j, 16) && v.degree(j) != 1);
    let is_n = |j: usize| v.z(j) == 7 && v.degree(j) != 1;
    let double_to = |c: usize, pred: &dyn Fn(usize) -> bool| {
        v.bonds(c).any(|(k, _, o)| o == BondOrder::Double && pred(k))
    };
    let carbonyl_like = |c: usize| {
        v.aliphatic(c, 6)
            && v.degree(c) == 3
            && double_to(c, &|k| v.aliphatic(k, 7) || v.aliphatic(k, 8) || v.aliphatic(k, 16))
    };
    let amidinium = |c: usize| {
        v.aliphatic(c, 6) && v.degree(c) == 3 && double_to(c, &|k| v.aliphatic(k, 7) && v.charge(k) == 1)
    };
    let acyclic_single = |b: usize, o: BondOrder| o == BondOrder::Single && !rings.is_ring_bond(b);
    v.bonds(i).any(|(j, b, o)| {
        acyclic_single(b, o)
            && ((carbonyl_like(i) && is_nos(j))
                || (is_nos(i) && carbonyl_like(j))
                || (amidinium(i) && is_n(j))
                || (is_n(i) && amidinium(j)))
    })
}

/// Number of aromatic rings: the cycle rank of the graph left after
/// removing every aliphatic ring atom singly bonded to a non-aromatic atom.
pub fn aromatic_ring_count(graph: &MolecularGraph) -> u32 {
    aromatic_ring_count_with(graph, &RingInfo::new(graph))
}

fn aromatic_ring_count_with(graph: &MolecularGraph, rings: &RingInfo) -> u32 {
    let n = graph.atom_count();
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            let atom = graph.atom(i);
            atom.aromatic
                || !rings.is_ring_atom(i)
                || graph.neighbors(i).iter().all(|&(j, b)| {
                    graph.atom(j).aromatic || graph.bonds()[b].order == BondOrder::Double
                        || graph.bonds()[b].order == BondOrder::Triple
                })
        })
        .collect();
    // Union-find over the kept subgraph to count components.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = 0usize;
    let mut components = keep.iter().filter(|&&k| k).count();
    for bond in graph.bonds() {
        if keep[bond.a] && keep[bond.b] {
            edges += 1;
            let (ra, rb) = (find(&mut parent, bond.a), find(&mut parent, bond.b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
    }
    let vertices = keep.iter().filter(|&&k| k).count();
    (edges + components - vertices) as u32
}

/// Number of alert patterns with at least one embedding.
pub fn structural_alerts(graph: &MolecularGraph, tables: &PropertyTables) -> u32 {
    tables
        .alerts()
        .iter()
        .filter(|a| contains_substructure(graph, &a.pattern).unwrap_or(false))
        .count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn desc(s: &str) -> DescriptorVector {
        descriptors(&parse(s).unwrap(), PropertyTables::builtin()).unwrap()
    }

    #[test]
    fn methane() {
        let d = desc("C");
        assert!((d.mw - 16.043).abs() < 0.01);
        assert_eq!((d.hbd, d.hba, d.rotb, d.arom), (0, 0, 0, 0));
        assert_eq!(d.psa, 0.0);
    }

    #[test]
    fn benzene() {
        let d = desc("c1ccccc1");
        assert_eq!((d.hbd, d.hba, d.rotb, d.arom), (0, 0, 0, 1));
        assert_eq!(d.psa, 0.0);
    }

    #[test]
    fn ethanol() {
        let d = desc("CCO");
        assert_eq!((d.hbd, d.hba, d.rotb), (1, 1, 0));
    }

    #[test]
    fn amide_bonds_do_not_rotate() {
        assert_eq!(rotatable_bonds(&parse("CCC(=O)NCC").unwrap()), 2);
        assert_eq!(rotatable_bonds(&parse("CCCC").unwrap()), 1);
        assert_eq!(rotatable_bonds(&parse("CC(C)(C)CC").unwrap()), 0);
        assert_eq!(rotatable_bonds(&parse("c1ccccc1-c1ccccc1").unwrap()), 1);
        assert_eq!(rotatable_bonds(&parse("C1CCCCC1").unwrap()), 0);
    }

    #[test]
    fn acceptors_skip_amide_nitrogen() {
        assert_eq!(hydrogen_bond_acceptors(&parse("CC(=O)N(C)C").unwrap()), 1);
        assert_eq!(hydrogen_bond_acceptors(&parse("CCN(C)C").unwrap()), 1);
        assert_eq!(hydrogen_bond_acceptors(&parse("c1ccncc1").unwrap()), 1);
        assert_eq!(hydrogen_bond_acceptors(&parse("c1cc[nH]c1").unwrap()), 0);
    }

    #[test]
    fn fused_and_linked_aromatics() {
        assert_eq!(aromatic_ring_count(&parse("c1ccc2ccccc2c1").unwrap()), 2);
        assert_eq!(aromatic_ring_count(&parse("c1ccc2c(c1)CCCC2").unwrap()), 1);
        assert_eq!(aromatic_ring_count(&parse("c1ccccc1Cc1ccccc1").unwrap()), 2);
        assert_eq!(aromatic_ring_count(&parse("C1CCCCC1").unwrap()), 0);
        // Ring atoms whose only non-aromatic neighbours are double-bonded stay.
        assert_eq!(aromatic_ring_count(&parse("O=C1c2ccccc2-c2ccccc21").unwrap()), 3);
    }

    #[test]
    fn sarin_alerts_and_counts() {
        let d = desc("CC(C)OP(C)(=O)F");
        assert_eq!(d.alerts, 1);
        assert_eq!((d.hbd, d.arom), (0, 0));
        assert_eq!(d.without_alerts().alerts, 0);
        let bare = PropertyTables::builtin().without_alerts();
        assert_eq!(descriptors(&parse("CC(C)OP(C)(=O)F").unwrap(), &bare).unwrap().alerts, 0);
    }

    #[test]
    fn values_follow_name_order() {
        let d = desc("CCO");
        let v = d.values();
        assert_eq!(v[0], d.mw);
        assert_eq!(v[3], d.hbd as f64);
        assert_eq!(v.len(), DESCRIPTOR_NAMES.len());
    }
}
