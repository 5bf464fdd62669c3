use crate::smiles::MolecularGraph;

/// Ring membership of atoms and bonds.
///
/// A bond is a ring bond exactly when it is not a bridge of the graph; an
/// atom is a ring atom when it has at least one ring bond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingInfo {
    ring_bond: Vec<bool>,
    ring_atom: Vec<bool>,
    in_three_ring: Vec<bool>,
}

impl RingInfo {
    pub fn new(graph: &MolecularGraph) -> RingInfo {
        let ring_bond: Vec<bool> = bridges(graph).into_iter().map(|b| !b).collect();
        let ring_atom = (0..graph.atom_count())
            .map(|i| graph.neighbors(i).iter().any(|&(_, b)| ring_bond[b]))
            .collect();
        let in_three_ring = (0..graph.atom_count())
            .map(|i| {
                let n = graph.neighbors(i);
                n.iter().enumerate().any(|(k, &(a, _))| {
                    n[k + 1..]
                        .iter()
                        .any(|&(b, _)| graph.bond_between(a, b).is_some())
                })
            })
            .collect();
        RingInfo {
            ring_bond,
            ring_atom,
            in_three_ring,
        }
    }

    pub fn is_ring_bond(&self, bond: usize) -> bool {
        self.ring_bond[bond]
    }

    pub fn is_ring_atom(&self, atom: usize) -> bool {
        self.ring_atom[atom]
    }

    pub fn in_three_ring(&self, atom: usize) -> bool {
        self.in_three_ring[atom]
    }
}

/// Marks every bridge (a bond whose removal disconnects its component),
/// using iterative depth-first search with low-link values.
fn bridges(graph: &MolecularGraph) -> Vec<bool> {
    let n = graph.atom_count();
    let mut is_bridge = vec![false; graph.bond_count()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (atom, bond used to reach it, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (v, via, ref mut next)) = stack.last_mut() {
            if let Some(&(w, b)) = graph.neighbors(v).get(*next) {
                *next += 1;
                if b == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, b, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn info(s: &str) -> (MolecularGraph, RingInfo) {
        let g = parse(s).unwrap();
        let r = RingInfo::new(&g);
        (g, r)
    }

    #[test]
    fn chains_have_no_rings() {
        let (g, r) = info("CCOCC");
        assert!((0..g.bond_count()).all(|b| !r.is_ring_bond(b)));
        assert!((0..g.atom_count()).all(|a| !r.is_ring_atom(a)));
    }

    #[test]
    fn substituted_ring() {
        // toluene: methyl bond is the only non-ring bond
        let (g, r) = info("Cc1ccccc1");
        assert!(!r.is_ring_atom(0));
        assert!((1..7).all(|a| r.is_ring_atom(a)));
        let ring_bonds = (0..g.bond_count()).filter(|&b| r.is_ring_bond(b)).count();
        assert_eq!(ring_bonds, 6);
    }

    #[test]
    fn linked_rings_keep_the_linker_acyclic() {
        let (g, r) = info("c1ccccc1-c1ccccc1");
        let acyclic: Vec<usize> = (0..g.bond_count()).filter(|&b| !r.is_ring_bond(b)).collect();
        assert_eq!(acyclic.len(), 1);
        let b = g.bonds()[acyclic[0]];
        assert_eq!((b.a, b.b), (5, 6));
    }

    #[test]
    fn three_membered_rings() {
        let (_, r) = info("CC1OC1");
        assert!(!r.in_three_ring(0));
        assert!(r.in_three_ring(1) && r.in_three_ring(2) && r.in_three_ring(3));
        let (_, r) = info("C1CCC1");
        assert!(!r.in_three_ring(0));
    }

    #[test]
    fn fused_and_spiro_systems() {
        let (g, r) = info("C1CCC2(CC1)CCCC2");
        assert!((0..g.bond_count()).all(|b| r.is_ring_bond(b)));
        let (g, r) = info("c1ccc2ccccc2c1");
        assert!((0..g.bond_count()).all(|b| r.is_ring_bond(b)));
    }
}
