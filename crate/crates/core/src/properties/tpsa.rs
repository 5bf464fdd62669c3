use super::rings::RingInfo;
use super::tables::{PropertyTables, TpsaRule};
use crate::smiles::{BondOrder, Element, MolecularGraph};

/// Polar surface contribution of every atom (zero for atoms other than N
/// and O).
pub fn tpsa_contributions(graph: &MolecularGraph, tables: &PropertyTables) -> Vec<f64> {
    let rings = RingInfo::new(graph);
    (0..graph.atom_count())
        .map(|i| atom_contribution(graph, &rings, tables, i))
        .collect()
}

/// Topological polar surface area (Å²) from N and O contributions.
pub fn tpsa(graph: &MolecularGraph, tables: &PropertyTables) -> f64 {
    tpsa_contributions(graph, tables).iter().sum()
}

struct Environment {
    degree: u32,
    hydrogens: u32,
    single: u32,
    double: u32,
    triple: u32,
    aromatic: u32,
}

fn environment(graph: &MolecularGraph, i: usize) -> Environment {
    let mut env = Environment {
        degree: 0,
        hydrogens: graph.total_hydrogens(i),
        single: 0,
        double: 0,
        triple: 0,
        aromatic: 0,
    };
    for &(j, b) in graph.neighbors(i) {
        if graph.atom(j).element == Element::H {
            env.hydrogens += 1;
            continue;
        }
        env.degree += 1;
        match graph.bonds()[b].order {
            BondOrder::Single => env.single += 1,
            BondOrder::Double => env.double += 1,
            BondOrder::Triple => env.triple += 1,
            BondOrder::Aromatic => env.aromatic += 1,
        }
    }
    env
}

fn matches(rule: &TpsaRule, env: &Environment, charge: i8, in_three_ring: bool) -> bool {
    let count_ok = |want: Option<u32>, have: u32| want.is_none_or(|w| w == have);
    rule.degree == env.degree
        && rule.hydrogens == env.hydrogens
        && rule.charge == charge
        && count_ok(rule.single, env.single)
        && count_ok(rule.double, env.double)
        && count_ok(rule.triple, env.triple)
        && count_ok(rule.aromatic, env.aromatic)
        && rule.in_three_ring.is_none_or(|r| r == in_three_ring)
}

fn atom_contribution(
    graph: &MolecularGraph,
    rings: &RingInfo,
    tables: &PropertyTables,
    i: usize,
) -> f64 {
    let atom = graph.atom(i);
    if atom.element != Element::N && atom.element != Element::O {
        return 0.0;
    }
    let env = environment(graph, i);
    let three = rings.in_three_ring(i);
    if let Some(rule) = tables
        .tpsa_rules()
        .iter()
        .find(|r| r.element == atom.element && matches(r, &env, atom.charge, three))
    {
        return rule.value;
    }
    tables.tpsa_default(atom.element).map_or(0.0, |d| {
        (d.base - d.per_neighbour * env.degree as f64 + d.per_hydrogen * env.hydrogens as f64)
            .max(0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn psa(s: &str) -> f64 {
        tpsa(&parse(s).unwrap(), PropertyTables::builtin())
    }

    #[test]
    fn hydrocarbons_have_no_polar_surface() {
        assert_eq!(psa("CCCC"), 0.0);
        assert_eq!(psa("c1ccccc1"), 0.0);
    }

    #[test]
    fn simple_groups() {
        assert!((psa("CCO") - 20.23).abs() < 1e-9);
        assert!((psa("CC(=O)O") - (17.07 + 20.23)).abs() < 1e-9);
        assert!((psa("CN") - 26.02).abs() < 1e-9);
        assert!((psa("c1ccncc1") - 12.89).abs() < 1e-9);
        assert!((psa("c1cc[nH]c1") - 15.79).abs() < 1e-9);
        assert!((psa("C1CO1") - 12.53).abs() < 1e-9);
    }

    #[test]
    fn nitro_group() {
        assert!((psa("C[N+](=O)[O-]") - (3.01 + 17.07 + 23.06)).abs() < 1e-9);
    }

    #[test]
    fn sulfur_and_phosphorus_are_ignored() {
        assert!((psa("CC(C)OP(C)(=O)F") - (9.23 + 17.07)).abs() < 1e-9);
        assert_eq!(psa("CSC"), 0.0);
    }

    #[test]
    fn unmatched_environment_uses_fallback() {
        // A protonated imine nitrogen carrying two hydrogens has no table row.
        let c = tpsa_contributions(&parse("C[NH2+]=C").unwrap(), PropertyTables::builtin());
        assert!((c[1] - (30.5 - 2.0 * 8.2 + 2.0 * 1.5)).abs() < 1e-9, "{c:?}");
    }
}
