use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use super::descriptors::DESCRIPTOR_NAMES;
use super::PropertyError;
use crate::smiles::{parse, Element, MolecularGraph};

/// Environment variable naming a directory whose table files replace the
/// built-in ones.
pub const DATA_DIR_ENV: &str = "OPFORGE_DATA_DIR";

/// File names of the five tables, in load order.
pub const TABLE_FILES: [&str; 5] = [
    "atomic_weights.tsv",
    "crippen.tsv",
    "tpsa.tsv",
    "alerts.tsv",
    "qed_params.tsv",
];

const BUILTIN: [&str; 5] = [
    include_str!("../../data/atomic_weights.tsv"),
    include_str!("../../data/crippen.tsv"),
    include_str!("../../data/tpsa.tsv"),
    include_str!("../../data/alerts.tsv"),
    include_str!("../../data/qed_params.tsv"),
];

/// Asymmetric double-sigmoid parameters for one descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesirabilityParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    /// Normalisation maximum.
    pub dmax: f64,
}

impl DesirabilityParams {
    pub fn is_valid(&self) -> bool {
        let all = [self.a, self.b, self.c, self.d, self.e, self.f, self.dmax];
        all.iter().all(|v| v.is_finite()) && self.e != 0.0 && self.f != 0.0 && self.dmax > 0.0
    }
}

/// One polar-surface row: an N or O environment and its contribution.
/// `None` fields match anything.
#[derive(Debug, Clone, PartialEq)]
pub struct TpsaRule {
    pub element: Element,
    pub degree: u32,
    pub hydrogens: u32,
    pub charge: i8,
    pub single: Option<u32>,
    pub double: Option<u32>,
    pub triple: Option<u32>,
    pub aromatic: Option<u32>,
    pub in_three_ring: Option<bool>,
    pub value: f64,
}

/// Fallback for an N or O environment no rule covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TpsaDefault {
    pub element: Element,
    pub base: f64,
    pub per_neighbour: f64,
    pub per_hydrogen: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alert {
    pub name: String,
    pub smiles: String,
    pub pattern: MolecularGraph,
}

/// Immutable parameter tables for descriptor and QED computation.
#[derive(Debug, Clone)]
pub struct PropertyTables {
    weights: Vec<f64>,
    crippen: HashMap<String, f64>,
    tpsa_rules: Vec<TpsaRule>,
    tpsa_defaults: Vec<TpsaDefault>,
    alerts: Vec<Alert>,
    desirability: [DesirabilityParams; 8],
    versions: Vec<(String, String)>,
}

impl PropertyTables {
    /// The tables compiled into the library, parsed once.
    pub fn builtin() -> &'static PropertyTables {
        static TABLES: OnceLock<PropertyTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            PropertyTables::from_texts(BUILTIN).expect("built-in property tables are well formed")
        })
    }

    /// Loads tables from `dir`; any of the five files missing there falls
    /// back to its built-in version.
    pub fn from_dir(dir: &Path) -> Result<PropertyTables, PropertyError> {
        let mut owned: Vec<String> = Vec::with_capacity(TABLE_FILES.len());
        for (name, builtin) in TABLE_FILES.iter().zip(BUILTIN) {
            let path = dir.join(name);
            if path.exists() {
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| PropertyError::IoFailure { path, source })?;
                owned.push(text);
            } else {
                owned.push(builtin.to_string());
            }
        }
        let texts: [&str; 5] = std::array::from_fn(|i| owned[i].as_str());
        PropertyTables::from_texts(texts)
    }

    /// Tables from the directory named by `OPFORGE_DATA_DIR`, or the
    /// built-in tables when it is unset.
    pub fn from_env() -> Result<PropertyTables, PropertyError> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => PropertyTables::from_dir(Path::new(&dir)),
            None => Ok(PropertyTables::builtin().clone()),
        }
    }

    /// Parses the five tables given in [`TABLE_FILES`] order.
    pub fn from_texts(texts: [&str; 5]) -> Result<PropertyTables, PropertyError> {
        let mut versions = Vec::new();
        let mut tables = Vec::new();
        for (name, text) in TABLE_FILES.iter().zip(texts) {
            let (version, rows) = split_table(name, text)?;
            versions.push((name.to_string(), version));
            tables.push(rows);
        }
        Ok(PropertyTables {
            weights: parse_weights(&tables[0])?,
            crippen: parse_crippen(&tables[1])?,
            tpsa_rules: parse_tpsa_rules(&tables[2])?,
            tpsa_defaults: parse_tpsa_defaults(&tables[2])?,
            alerts: parse_alerts(&tables[3])?,
            desirability: parse_desirability(&tables[4])?,
            versions,
        })
    }

    pub fn atomic_weight(&self, element: Element) -> Result<f64, PropertyError> {
        self.weights
            .get(element.atomic_number() as usize)
            .copied()
            .filter(|w| *w > 0.0)
            .ok_or_else(|| PropertyError::UnknownElementWeight(element.symbol().to_string()))
    }

    pub fn crippen(&self, atom_type: &str) -> Result<f64, PropertyError> {
        self.crippen
            .get(atom_type)
            .copied()
            .ok_or_else(|| PropertyError::MissingLogPType(atom_type.to_string()))
    }

    pub fn tpsa_rules(&self) -> &[TpsaRule] {
        &self.tpsa_rules
    }

    pub(crate) fn tpsa_default(&self, element: Element) -> Option<&TpsaDefault> {
        self.tpsa_defaults.iter().find(|d| d.element == element)
    }

    pub fn alerts(&self) -> &[Alert] {
        &self.alerts
    }

    /// A copy with no alert patterns, so every molecule scores ALERTS = 0.
    pub fn without_alerts(&self) -> PropertyTables {
        PropertyTables {
            alerts: Vec::new(),
            ..self.clone()
        }
    }

    /// Desirability parameters in descriptor order (MW, ALOGP, HBA, HBD, PSA,
    /// ROTB, AROM, ALERTS).
    pub fn desirability(&self) -> &[DesirabilityParams; 8] {
        &self.desirability
    }

    /// `(file name, version)` for every table.
    pub fn versions(&self) -> &[(String, String)] {
        &self.versions
    }
}

type Rows<'a> = Vec<(usize, Vec<&'a str>)>;

/// Splits a table into its version and tab-separated data rows, keeping
/// 1-based line numbers.
fn split_table<'a>(name: &str, text: &'a str) -> Result<(String, Rows<'a>), PropertyError> {
    let mut version = None;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#version") {
            if version.is_some() || !rows.is_empty() {
                return Err(malformed(name, i + 1, "#version must be the first line"));
            }
            version = Some(rest.trim().to_string());
            continue;
        }
        if version.is_none() {
            return Err(malformed(name, i + 1, "missing #version header"));
        }
        if line.starts_with('#') {
            continue;
        }
        rows.push((i + 1, line.split('\t').map(str::trim).collect()));
    }
    match version {
        Some(v) if !v.is_empty() => Ok((v, rows)),
        _ => Err(malformed(name, 1, "missing #version header")),
    }
}

fn malformed(table: &str, line: usize, reason: impl Into<String>) -> PropertyError {
    PropertyError::MalformedTable {
        table: table.to_string(),
        line,
        reason: reason.into(),
    }
}

fn number(table: &str, line: usize, field: &str) -> Result<f64, PropertyError> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| malformed(table, line, format!("{field:?} is not a number")))
}

fn expect_fields(table: &str, line: usize, fields: &[&str], n: usize) -> Result<(), PropertyError> {
    if fields.len() == n {
        Ok(())
    } else {
        Err(malformed(table, line, format!("expected {n} fields, found {}", fields.len())))
    }
}

fn element(table: &str, line: usize, symbol: &str) -> Result<Element, PropertyError> {
    Element::from_symbol(symbol)
        .ok_or_else(|| malformed(table, line, format!("unknown element {symbol:?}")))
}

fn parse_weights(rows: &Rows) -> Result<Vec<f64>, PropertyError> {
    const T: &str = "atomic_weights.tsv";
    let mut weights = vec![0.0; 87];
    for (line, fields) in rows {
        expect_fields(T, *line, fields, 2)?;
        let el = element(T, *line, fields[0])?;
        let w = number(T, *line, fields[1])?;
        if w <= 0.0 {
            return Err(malformed(T, *line, "weight must be positive"));
        }
        weights[el.atomic_number() as usize] = w;
    }
    if let Some(z) = (1..weights.len()).find(|&z| weights[z] == 0.0) {
        let symbol = Element::from_atomic_number(z as u8).map_or("?", |e| e.symbol());
        return Err(PropertyError::UnknownElementWeight(symbol.to_string()));
    }
    Ok(weights)
}

fn parse_crippen(rows: &Rows) -> Result<HashMap<String, f64>, PropertyError> {
    const T: &str = "crippen.tsv";
    let mut map = HashMap::new();
    for (line, fields) in rows {
        expect_fields(T, *line, fields, 2)?;
        let value = number(T, *line, fields[1])?;
        if map.insert(fields[0].to_string(), value).is_some() {
            return Err(malformed(T, *line, format!("duplicate type {}", fields[0])));
        }
    }
    Ok(map)
}

fn optional_count(table: &str, line: usize, field: &str) -> Result<Option<u32>, PropertyError> {
    if field == "*" {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| malformed(table, line, format!("{field:?} is not a count or *")))
}

fn parse_tpsa_rules(rows: &Rows) -> Result<Vec<TpsaRule>, PropertyError> {
    const T: &str = "tpsa.tsv";
    let mut rules = Vec::new();
    for (line, f) in rows.iter().filter(|(_, f)| f[0] != "default") {
        let line = *line;
        expect_fields(T, line, f, 10)?;
        let count = |s: &str| -> Result<u32, PropertyError> {
            s.parse()
                .map_err(|_| malformed(T, line, format!("{s:?} is not a count")))
        };
        let in_three_ring = match f[8] {
            "*" => None,
            "y" => Some(true),
            "n" => Some(false),
            other => return Err(malformed(T, line, format!("ring flag {other:?} is not y, n or *"))),
        };
        rules.push(TpsaRule {
            element: element(T, line, f[0])?,
            degree: count(f[1])?,
            hydrogens: count(f[2])?,
            charge: f[3]
                .parse()
                .map_err(|_| malformed(T, line, format!("{:?} is not a charge", f[3])))?,
            single: optional_count(T, line, f[4])?,
            double: optional_count(T, line, f[5])?,
            triple: optional_count(T, line, f[6])?,
            aromatic: optional_count(T, line, f[7])?,
            in_three_ring,
            value: number(T, line, f[9])?,
        });
    }
    Ok(rules)
}

fn parse_tpsa_defaults(rows: &Rows) -> Result<Vec<TpsaDefault>, PropertyError> {
    const T: &str = "tpsa.tsv";
    rows.iter()
        .filter(|(_, f)| f[0] == "default")
        .map(|(line, f)| {
            expect_fields(T, *line, f, 5)?;
            Ok(TpsaDefault {
                element: element(T, *line, f[1])?,
                base: number(T, *line, f[2])?,
                per_neighbour: number(T, *line, f[3])?,
                per_hydrogen: number(T, *line, f[4])?,
            })
        })
        .collect()
}

fn parse_alerts(rows: &Rows) -> Result<Vec<Alert>, PropertyError> {
    const T: &str = "alerts.tsv";
    rows.iter()
        .map(|(line, f)| {
            expect_fields(T, *line, f, 2)?;
            let pattern = parse(f[1]).map_err(|source| PropertyError::InvalidAlert {
                name: f[0].to_string(),
                source,
            })?;
            Ok(Alert {
                name: f[0].to_string(),
                smiles: f[1].to_string(),
                pattern,
            })
        })
        .collect()
}

fn parse_desirability(rows: &Rows) -> Result<[DesirabilityParams; 8], PropertyError> {
    const T: &str = "qed_params.tsv";
    let mut found: [Option<DesirabilityParams>; 8] = [None; 8];
    for (line, f) in rows {
        expect_fields(T, *line, f, 8)?;
        let Some(slot) = DESCRIPTOR_NAMES.iter().position(|n| *n == f[0]) else {
            return Err(malformed(T, *line, format!("unknown descriptor {}", f[0])));
        };
        let v: Vec<f64> = f[1..]
            .iter()
            .map(|s| number(T, *line, s))
            .collect::<Result<_, _>>()?;
        let params = DesirabilityParams {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
            e: v[4],
            f: v[5],
            dmax: v[6],
        };
        if !params.is_valid() {
            return Err(malformed(T, *line, "requires e != 0, f != 0 and dmax > 0"));
        }
        found[slot] = Some(params);
    }
    if let Some(i) = found.iter().position(Option::is_none) {
        return Err(PropertyError::MissingDesirability(DESCRIPTOR_NAMES[i].to_string()));
    }
    Ok(found.map(|p| p.expect("checked above")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_table(index: usize, text: &str) -> Result<PropertyTables, PropertyError> {
        let mut texts = BUILTIN;
        texts[index] = text;
        PropertyTables::from_texts(texts)
    }

    #[test]
    fn builtin_tables_load() {
        let t = PropertyTables::builtin();
        assert!((t.atomic_weight(Element::C).unwrap() - 12.011).abs() < 1e-9);
        assert!((t.atomic_weight(Element::H).unwrap() - 1.008).abs() < 1e-9);
        assert!((t.crippen("C1").unwrap() - 0.1441).abs() < 1e-12);
        assert!(t.alerts().len() >= 30);
        assert!(t.tpsa_rules().len() > 20);
        assert_eq!(t.versions().len(), 5);
        assert!(t.desirability().iter().all(DesirabilityParams::is_valid));
    }

    #[test]
    fn every_parser_element_has_a_weight() {
        let t = PropertyTables::builtin();
        for z in 1..=86u8 {
            let el = Element::from_atomic_number(z).unwrap();
            assert!(t.atomic_weight(el).unwrap() > 0.0, "{el}");
        }
    }

    #[test]
    fn missing_version_is_rejected() {
        let err = with_table(1, "C1\t0.1\n").unwrap_err();
        assert!(matches!(err, PropertyError::MalformedTable { line: 1, .. }), "{err}");
    }

    #[test]
    fn bad_alert_is_rejected() {
        let err = with_table(3, "#version\tx\nbroken\tC(C\n").unwrap_err();
        assert!(matches!(err, PropertyError::InvalidAlert { .. }), "{err}");
    }

    #[test]
    fn missing_weight_is_reported() {
        let err = with_table(0, "#version\tx\nH\t1.008\n").unwrap_err();
        assert!(matches!(err, PropertyError::UnknownElementWeight(ref s) if s == "He"), "{err}");
    }

    #[test]
    fn desirability_needs_all_descriptors() {
        let err = with_table(4, "#version\tx\nMW\t1\t1\t1\t1\t1\t1\t1\n").unwrap_err();
        assert!(matches!(err, PropertyError::MissingDesirability(ref s) if s == "ALOGP"), "{err}");
        let err = with_table(4, "#version\tx\nMW\t1\t1\t1\t1\t0\t1\t1\n").unwrap_err();
        assert!(matches!(err, PropertyError::MalformedTable { .. }), "{err}");
    }

    #[test]
    fn directory_overrides_single_files() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("alerts.tsv"), "#version\tcustom\nthiol\t[SH]\n").unwrap();
        let t = PropertyTables::from_dir(dir.path()).unwrap();
        assert_eq!(t.alerts().len(), 1);
        assert_eq!(t.versions()[3], ("alerts.tsv".to_string(), "custom".to_string()));
        assert_eq!(t.versions()[0].1, "1");
    }
}
