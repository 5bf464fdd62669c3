//! Wildman–Crippen atom typing for logP.
//!
//! Each heavy atom is assigned the first type, in table order, whose
//! environment it satisfies; every attached hydrogen gets a hydrogen type
//! from its heavy neighbour. Environments follow the published atom-type
//! definitions with hydrogens counted as attached atoms.

use super::tables::PropertyTables;
use super::PropertyError;
use crate::smiles::{BondOrder, MolecularGraph};

/// Crippen types of one atom and of its attached hydrogens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrippenType {
    pub atom: &'static str,
    /// Type shared by every hydrogen on the atom; `None` without hydrogens.
    pub hydrogen: Option<&'static str>,
}

/// Types every atom of `graph`.
pub fn crippen_types(graph: &MolecularGraph) -> Result<Vec<CrippenType>, PropertyError> {
    let c = Ctx { g: graph };
    (0..graph.atom_count())
        .map(|i| {
            let atom = c.atom_type(i).ok_or_else(|| PropertyError::UntypedAtom {
                atom: i,
                element: graph.atom(i).element.symbol().to_string(),
            })?;
            let hydrogen = (graph.total_hydrogens(i) > 0).then(|| c.hydrogen_type(i, None));
            Ok(CrippenType { atom, hydrogen })
        })
        .collect()
}

/// logP contribution of each atom together with its attached hydrogens.
pub fn crippen_contributions(
    graph: &MolecularGraph,
    tables: &PropertyTables,
) -> Result<Vec<f64>, PropertyError> {
    crippen_types(graph)?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut v = tables.crippen(t.atom)?;
            if let Some(h) = t.hydrogen {
                v += graph.total_hydrogens(i) as f64 * tables.crippen(h)?;
            }
            Ok(v)
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Bd {
    /// Unspecified bond: single or aromatic.
    Any,
    Single,
    Double,
    Triple,
    Arom,
}

impl Bd {
    fn accepts(self, order: BondOrder) -> bool {
        match self {
            Bd::Any => matches!(order, BondOrder::Single | BondOrder::Aromatic),
            Bd::Single => order == BondOrder::Single,
            Bd::Double => order == BondOrder::Double,
            Bd::Triple => order == BondOrder::Triple,
            Bd::Arom => order == BondOrder::Aromatic,
        }
    }
}

type Pred<'p> = &'p dyn Fn(usize) -> bool;

struct Ctx<'a> {
    g: &'a MolecularGraph,
}

const HALOGENS: [u8; 4] = [9, 17, 35, 53];

impl Ctx<'_> {
    fn z(&self, i: usize) -> u8 {
        self.g.atom(i).element.atomic_number()
    }

    fn ar(&self, i: usize) -> bool {
        self.g.atom(i).aromatic
    }

    /// Aliphatic atom of element `z` (an upper-case symbol).
    fn al(&self, i: usize, z: u8) -> bool {
        self.z(i) == z && !self.ar(i)
    }

    /// Aromatic atom of element `z`.
    fn aro(&self, i: usize, z: u8) -> bool {
        self.z(i) == z && self.ar(i)
    }

    fn h(&self, i: usize) -> u32 {
        self.g.total_hydrogens(i)
    }

    /// Total connections, hydrogens included.
    fn x(&self, i: usize) -> u32 {
        self.g.degree(i) as u32 + self.h(i)
    }

    fn q(&self, i: usize) -> i8 {
        self.g.atom(i).charge
    }

    /// `[A;!#1]`
    fn hv(&self, j: usize) -> bool {
        !self.ar(j) && self.z(j) != 1
    }

    /// `[!#1;A,a]`
    fn heavy(&self, j: usize) -> bool {
        self.z(j) != 1
    }

    fn nb(&self, i: usize, specs: &[(Bd, Pred)]) -> bool {
        self.nb_except(i, &[], specs)
    }

    /// Whether distinct neighbours of `i`, none of them in `exclude`, can be
    /// assigned one to each spec.
    fn nb_except(&self, i: usize, exclude: &[usize], specs: &[(Bd, Pred)]) -> bool {
        let cands: Vec<(usize, BondOrder)> = self
            .g
            .neighbors(i)
            .iter()
            .filter(|(j, _)| !exclude.contains(j))
            .map(|&(j, b)| (j, self.g.bonds()[b].order))
            .collect();
        let mut used = vec![false; cands.len()];
        assign(&cands, specs, &mut used)
    }

    fn atom_type(&self, i: usize) -> Option<&'static str> {
        match self.z(i) {
            1 => Some(self.hydrogen_type_of_atom(i)),
            6 => Some(self.carbon(i)),
            7 => Some(self.nitrogen(i)),
            8 => Some(self.oxygen(i)),
            _ => self.other(i),
        }
    }

    fn carbon(&self, i: usize) -> &'static str {
        let (h, x) = (self.h(i), self.x(i));
        let hv = |j| self.hv(j);
        let al_c = |j| self.al(j, 6);
        let aro_c = |j| self.aro(j, 6);
        let arom = |j| self.ar(j);
        let het = |j| !self.ar(j) && matches!(self.z(j), 7 | 8 | 15 | 16 | 9 | 17 | 35 | 53);
        if !self.ar(i) {
            if h == 4
                || (h == 3 && self.nb(i, &[(Bd::Any, &al_c)]))
                || (h == 2 && self.nb(i, &[(Bd::Any, &al_c), (Bd::Any, &al_c)]))
            {
                return "C1";
            }
            let three_c = [(Bd::Any, &al_c as Pred), (Bd::Any, &al_c), (Bd::Any, &al_c)];
            if (h == 1 && self.nb(i, &three_c))
                || self.nb(i, &[(Bd::Any, &al_c), (Bd::Any, &al_c), (Bd::Any, &al_c), (Bd::Any, &al_c)])
            {
                return "C2";
            }
            if (h == 3 && self.nb(i, &[(Bd::Any, &het)]))
                || (h == 2 && x == 4 && self.nb(i, &[(Bd::Any, &het), (Bd::Any, &hv)]))
            {
                return "C3";
            }
            if (h == 1 && x == 4 && self.nb(i, &[(Bd::Any, &het), (Bd::Any, &hv), (Bd::Any, &hv)]))
                || (h == 0
                    && x == 4
                    && self.nb(
                        i,
                        &[(Bd::Any, &het), (Bd::Any, &hv), (Bd::Any, &hv), (Bd::Any, &hv)],
                    ))
            {
                return "C4";
            }
            let non_c = |j| !self.ar(j) && !matches!(self.z(j), 1 | 6);
            if self.nb(i, &[(Bd::Double, &non_c)]) {
                return "C5";
            }
            if (h == 2 && self.nb(i, &[(Bd::Double, &al_c)]))
                || (h == 1 && self.nb(i, &[(Bd::Double, &al_c), (Bd::Any, &hv)]))
                || (h == 0 && self.nb(i, &[(Bd::Double, &al_c), (Bd::Any, &hv), (Bd::Any, &hv)]))
                || self.nb(i, &[(Bd::Double, &al_c), (Bd::Double, &al_c)])
            {
                return "C6";
            }
            if x == 2 && self.nb(i, &[(Bd::Triple, &hv)]) {
                return "C7";
            }
            if h == 3 && self.nb(i, &[(Bd::Any, &aro_c)]) {
                return "C8";
            }
            if h == 3 && self.nb(i, &[(Bd::Any, &arom)]) {
                return "C9";
            }
            if x == 4 && h <= 2 && self.nb(i, &[(Bd::Any, &arom)]) {
                return ["C12", "C11", "C10"][h as usize];
            }
            if self.nb(i, &[(Bd::Double, &al_c), (Bd::Any, &arom), (Bd::Any, &hv)])
                || self.nb(i, &[(Bd::Double, &al_c), (Bd::Any, &aro_c), (Bd::Any, &arom)])
                || (h == 1 && self.nb(i, &[(Bd::Double, &al_c), (Bd::Any, &arom)]))
                || self.nb(i, &[(Bd::Double, &aro_c)])
            {
                return "C26";
            }
            let unusual = |j| {
                !self.ar(j) && !matches!(self.z(j), 1 | 6 | 7 | 8 | 15 | 16 | 9 | 17 | 35 | 53)
            };
            if x == 4 && self.nb(i, &[(Bd::Any, &unusual)]) {
                return "C27";
            }
        } else {
            let unusual = |j| !self.ar(j) && !matches!(self.z(j), 1 | 6 | 7 | 8 | 16 | 9 | 17 | 35 | 53);
            if h == 0 && self.nb(i, &[(Bd::Single, &unusual)]) {
                return "C13";
            }
            for (z, name) in HALOGENS.iter().zip(["C14", "C15", "C16", "C17"]) {
                if self.nb(i, &[(Bd::Any, &|j| self.z(j) == *z)]) {
                    return name;
                }
            }
            if h == 1 {
                return "C18";
            }
            let ring = (Bd::Arom, &arom as Pred);
            if self.nb(i, &[ring, ring, ring]) {
                return "C19";
            }
            if self.nb(i, &[ring, ring, (Bd::Single, &arom)]) {
                return "C20";
            }
            for (z, name) in [(6, "C21"), (7, "C22"), (8, "C23"), (16, "C24")] {
                if self.nb(i, &[ring, ring, (Bd::Single, &|j| self.al(j, z))]) {
                    return name;
                }
            }
            let cno = |j| !self.ar(j) && matches!(self.z(j), 6 | 7 | 8);
            if self.nb(i, &[ring, ring, (Bd::Double, &cno)]) {
                return "C25";
            }
        }
        "CS"
    }

    fn nitrogen(&self, i: usize) -> &'static str {
        let (h, q) = (self.h(i), self.q(i));
        let hv = |j| self.hv(j);
        let heavy = |j| self.heavy(j);
        let arom = |j| self.ar(j);
        let positive = (1..=3).contains(&q);
        if !self.ar(i) {
            if q == 0 {
                if h == 2 && self.nb(i, &[(Bd::Any, &hv)]) {
                    return "N1";
                }
                if h == 1 && self.nb(i, &[(Bd::Any, &hv), (Bd::Any, &hv)]) {
                    return "N2";
                }
                if h == 2 && self.nb(i, &[(Bd::Any, &arom)]) {
                    return "N3";
                }
                if h == 1 && self.nb(i, &[(Bd::Any, &heavy), (Bd::Any, &arom)]) {
                    return "N4";
                }
                if h == 1 && self.nb(i, &[(Bd::Double, &heavy)]) {
                    return "N5";
                }
                if self.nb(i, &[(Bd::Double, &heavy), (Bd::Any, &heavy)]) {
                    return "N6";
                }
                if self.nb(i, &[(Bd::Any, &hv), (Bd::Any, &hv), (Bd::Any, &hv)]) {
                    return "N7";
                }
                if self.nb(i, &[(Bd::Any, &arom), (Bd::Any, &heavy), (Bd::Any, &hv)])
                    || self.nb(i, &[(Bd::Any, &arom), (Bd::Any, &arom), (Bd::Any, &arom)])
                {
                    return "N8";
                }
                if self.nb(i, &[(Bd::Triple, &hv)]) {
                    return "N9";
                }
            }
            if (1..=3).contains(&h) && positive {
                return "N10";
            }
        } else if q == 0 {
            return "N11";
        } else if positive {
            return "N12";
        }
        if !self.ar(i) {
            let any_hv = (Bd::Any, &hv as Pred);
            if h == 0
                && positive
                && (self.nb(i, &[any_hv, any_hv, any_hv, any_hv])
                    || self.nb(i, &[(Bd::Double, &hv), any_hv, (Bd::Any, &heavy)])
                    || self.nb(
                        i,
                        &[(Bd::Double, &|j| self.z(j) == 6), (Bd::Double, &|j| self.z(j) == 7)],
                    ))
            {
                return "N13";
            }
            let anion = |j| self.al(j, 7) && (-3..=-1).contains(&self.q(j));
            if (positive && self.nb(i, &[(Bd::Triple, &hv)]))
                || (-3..=-1).contains(&q)
                || (positive && self.nb(i, &[(Bd::Double, &anion), (Bd::Double, &|j| self.al(j, 7))]))
            {
                return "N14";
            }
        }
        "NS"
    }

    fn oxygen(&self, i: usize) -> &'static str {
        if self.ar(i) {
            return "O1";
        }
        let (h, x, q) = (self.h(i), self.x(i), self.q(i));
        let hv = |j| self.hv(j);
        let heavy = |j| self.heavy(j);
        let arom = |j| self.ar(j);
        let anion = (-3..=-1).contains(&q);
        if h == 1 || h == 2 {
            return "O2";
        }
        if self.nb(i, &[(Bd::Any, &hv), (Bd::Any, &hv)]) {
            return "O3";
        }
        if self.nb(i, &[(Bd::Any, &arom), (Bd::Any, &heavy)]) {
            return "O4";
        }
        if self.nb(i, &[(Bd::Double, &|j| matches!(self.z(j), 7 | 8))])
            || (x == 1 && anion && self.nb(i, &[(Bd::Any, &|j| self.z(j) == 7)]))
        {
            return "O5";
        }
        if (x == 1 && (q == -1 || q == -2) && self.nb(i, &[(Bd::Any, &|j| self.z(j) == 16)]))
            || (q == 0 && self.nb(i, &[(Bd::Double, &|j| self.z(j) == 16 && self.q(j) == 0)]))
        {
            return "O6";
        }
        // Carbonyl carbon on the other side of a double bond, if any.
        let carbonyl = |pred: &dyn Fn(usize) -> bool| {
            self.nb(i, &[(Bd::Double, &|j| self.al(j, 6) && pred(j))])
        };
        let carboxylate = |j| {
            self.al(j, 6) && self.nb_except(j, &[i], &[(Bd::Double, &|k| self.al(k, 8))])
        };
        if q == -1 && self.nb(i, &[(Bd::Any, &carboxylate)]) {
            return "O12";
        }
        let other = |j| !matches!(self.z(j), 1) && !self.al(j, 7) && !self.al(j, 16);
        if x == 1 && anion && self.nb(i, &[(Bd::Any, &other)]) {
            return "O7";
        }
        if self.nb(i, &[(Bd::Double, &|j| self.aro(j, 6))]) {
            return "O8";
        }
        let al_c = |j| self.al(j, 6);
        let aro_c = |j| self.aro(j, 6);
        let rest = |j: usize, specs: &[(Bd, Pred)]| self.nb_except(j, &[i], specs);
        if carbonyl(&|j| self.h(j) == 1 && rest(j, &[(Bd::Any, &al_c)]))
            || carbonyl(&|j| rest(j, &[(Bd::Any, &al_c), (Bd::Any, &hv)]))
            || carbonyl(&|j| {
                self.h(j) == 1 && rest(j, &[(Bd::Any, &|k| self.al(k, 7) || self.al(k, 8))])
            })
            || carbonyl(&|j| self.h(j) == 2)
            || carbonyl(&|j| self.x(j) == 2 && rest(j, &[(Bd::Double, &|k| self.al(k, 8))]))
        {
            return "O9";
        }
        let c_or_c = |j| self.z(j) == 6;
        let arom_heavy = |j| self.ar(j) && self.z(j) != 1;
        if carbonyl(&|j| self.h(j) == 1 && rest(j, &[(Bd::Any, &aro_c)]))
            || carbonyl(&|j| rest(j, &[(Bd::Any, &c_or_c), (Bd::Any, &arom_heavy)]))
            || carbonyl(&|j| rest(j, &[(Bd::Any, &aro_c), (Bd::Any, &hv)]))
        {
            return "O10";
        }
        let non_c = |j| !matches!(self.z(j), 1 | 6);
        if carbonyl(&|j| rest(j, &[(Bd::Any, &non_c), (Bd::Any, &non_c)])) {
            return "O11";
        }
        "OS"
    }

    fn other(&self, i: usize) -> Option<&'static str> {
        let (z, q) = (self.z(i), self.q(i));
        Some(match z {
            9 | 17 | 35 | 53 if q == 0 => match z {
                9 => "F",
                17 => "Cl",
                35 => "Br",
                _ => "I",
            },
            9 | 17 | 35 | 53 if q == -1 => "Hal",
            53 if (1..=3).contains(&q) => "Hal",
            3 | 11 | 19 | 37 | 55 if q == 1 => "Hal",
            15 => "P",
            16 if !self.ar(i) => {
                let charged = matches!(q, -4..=-1 | 1..=3 | 5 | 6);
                let double_hetero = q == 0
                    && self.nb(
                        i,
                        &[(Bd::Double, &|j| {
                            !self.ar(j) && matches!(self.z(j), 7 | 8 | 15 | 16)
                        })],
                    );
                if charged || double_hetero {
                    "S2"
                } else {
                    "S1"
                }
            }
            16 => "S3",
            3 | 11 | 19 | 37 | 55 | 4 | 12 | 20 | 38 | 56 | 5 | 13 | 31 | 49 | 81 | 14 | 32 | 50
            | 82 | 33 | 51 | 83 | 34 | 52 | 84 => "Me1",
            21..=30 | 39..=48 | 72..=80 => "Me2",
            _ => return None,
        })
    }

    /// Type of a hydrogen attached to heavy atom `p`; `this` is the hydrogen
    /// itself when it is an explicit atom of the graph.
    fn hydrogen_type(&self, p: usize, this: Option<usize>) -> &'static str {
        let zp = self.z(p);
        if zp == 6 || zp == 1 {
            return "H1";
        }
        let exclude: Vec<usize> = this.into_iter().collect();
        // Hydrogens on p other than this one.
        let graph_h = self
            .g
            .neighbors(p)
            .iter()
            .filter(|&&(j, _)| self.z(j) == 1 && Some(j) != this)
            .count() as u32;
        let other_h = graph_h + self.h(p) - u32::from(this.is_none());
        let oxygen = self.al(p, 8);
        // The amine-like type takes precedence over the generic polar one.
        if zp == 7 || (oxygen && self.nb_except(p, &exclude, &[(Bd::Any, &|j| self.z(j) == 7)])) {
            return "H3";
        }
        if oxygen {
            let alcohol = |j| (self.al(j, 6) && self.x(j) == 4) || self.aro(j, 6);
            if self.nb_except(p, &exclude, &[(Bd::Any, &alcohol)]) {
                return "H2";
            }
            let not_cnos = |j| {
                self.z(j) != 1 && ![6, 7, 8, 16].iter().any(|&z| self.al(j, z))
            };
            if other_h > 0 || self.nb_except(p, &exclude, &[(Bd::Any, &not_cnos)]) {
                return "H2";
            }
        }
        if ![6, 7, 8].iter().any(|&z| self.al(p, z)) {
            return "H2";
        }
        if oxygen {
            let acid_c = |j| {
                self.al(j, 6)
                    && self.nb_except(
                        j,
                        &[p],
                        &[(Bd::Double, &|k| {
                            matches!(self.z(k), 6 | 7) || self.al(k, 8) || self.al(k, 16)
                        })],
                    )
            };
            if self.nb_except(p, &exclude, &[(Bd::Any, &acid_c)])
                || self.nb_except(p, &exclude, &[(Bd::Any, &|j| self.al(j, 8) || self.al(j, 16))])
            {
                return "H4";
            }
        }
        "HS"
    }

    /// Type of a hydrogen that is itself an atom of the graph.
    fn hydrogen_type_of_atom(&self, i: usize) -> &'static str {
        match self.g.neighbors(i).first() {
            Some(&(p, _)) => self.hydrogen_type(p, Some(i)),
            None => "HS",
        }
    }
}

/// Backtracking assignment of distinct candidates to specs.
fn assign(cands: &[(usize, BondOrder)], specs: &[(Bd, Pred)], used: &mut [bool]) -> bool {
    let Some(((bond, pred), rest)) = specs.split_first() else {
        return true;
    };
    for (k, &(j, order)) in cands.iter().enumerate() {
        if used[k] || !bond.accepts(order) || !pred(j) {
            continue;
        }
        used[k] = true;
        let ok = assign(cands, rest, used);
        used[k] = false;
        if ok {
            return true;
        }
    }
    false
}
