//! Chemical elements and the valence model used for validation and
//! implicit-hydrogen assignment.

use std::fmt;

const SYMBOLS: [&str; 86] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In",
    "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb",
    "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl",
    "Pb", "Bi", "Po", "At", "Rn",
];

/// An element, stored as its atomic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u8);

impl Element {
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const SI: Element = Element(14);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const SE: Element = Element(34);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        (1..=SYMBOLS.len() as u8).contains(&z).then_some(Element(z))
    }

    /// Looks up a capitalised element symbol (`"Cl"`, `"C"`).
    pub fn from_symbol(symbol: &str) -> Option<Element> {
        SYMBOLS
            .iter()
            .position(|s| *s == symbol)
            .map(|i| Element(i as u8 + 1))
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        SYMBOLS[self.0 as usize - 1]
    }

    pub fn is_halogen(self) -> bool {
        matches!(self.0, 9 | 17 | 35 | 53)
    }

    /// Base valences of a neutral atom. `None` for elements without a
    /// modelled valence (metals and the like are left unchecked).
    fn neutral_valences(z: u8) -> Option<&'static [u8]> {
        Some(match z {
            1 => &[1],
            2 | 10 | 18 | 36 | 54 | 86 => &[0],
            5 => &[3],
            6 => &[4],
            7 => &[3],
            8 => &[2],
            9 | 17 | 35 => &[1],
            53 => &[1],
            14 | 32 => &[4],
            15 | 33 => &[3, 5],
            16 | 34 | 52 => &[2, 4, 6],
            _ => return None,
        })
    }

    fn period(z: u8) -> u8 {
        match z {
            1..=2 => 1,
            3..=10 => 2,
            11..=18 => 3,
            19..=36 => 4,
            37..=54 => 5,
            _ => 6,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Allowed total valences (bond orders plus hydrogens) for an element in a
/// given charge state.
///
/// A charged atom takes the valences of the isoelectronic element in the
/// same period: N+ behaves like C, O- like F, C- like N. For N and O this is
/// exactly "+1 raises, -1 lowers by one". Returns `None` when the element or
/// its charged form has no modelled valence.
pub fn allowed_valences(element: Element, charge: i8) -> Option<&'static [u8]> {
    let z = element.atomic_number() as i16;
    if charge == 0 {
        return Element::neutral_valences(z as u8);
    }
    let shifted = z - charge as i16;
    if !(1..=86).contains(&shifted) || Element::period(shifted as u8) != Element::period(z as u8) {
        return None;
    }
    Element::neutral_valences(shifted as u8)
}

/// Smallest allowed valence that is at least `used`, or `None` if `used`
/// already exceeds every allowed value.
pub fn fill_valence(valences: &[u8], used: u32) -> Option<u32> {
    valences.iter().map(|&v| v as u32).find(|&v| v >= used)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_round_trip() {
        for z in 1..=86u8 {
            let el = Element::from_atomic_number(z).unwrap();
            assert_eq!(Element::from_symbol(el.symbol()), Some(el));
        }
        assert_eq!(Element::from_symbol("Cl"), Some(Element::CL));
        assert_eq!(Element::from_symbol("cl"), None);
    }

    #[test]
    fn charge_shifts_nitrogen_and_oxygen_by_one() {
        assert_eq!(allowed_valences(Element::N, 1), Some(&[4u8][..]));
        assert_eq!(allowed_valences(Element::N, -1), Some(&[2u8][..]));
        assert_eq!(allowed_valences(Element::O, 1), Some(&[3u8][..]));
        assert_eq!(allowed_valences(Element::O, -1), Some(&[1u8][..]));
        assert_eq!(allowed_valences(Element::C, -1), Some(&[3u8][..]));
        assert_eq!(allowed_valences(Element::F, -1), Some(&[0u8][..]));
    }

    #[test]
    fn fill_picks_next_allowed_value() {
        assert_eq!(fill_valence(&[3, 5], 4), Some(5));
        assert_eq!(fill_valence(&[3, 5], 0), Some(3));
        assert_eq!(fill_valence(&[2], 3), None);
    }
}
