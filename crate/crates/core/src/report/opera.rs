use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::ReportError;

/// Externally predicted properties of one molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalPropertyRecord {
    pub id: String,
    pub logp: f64,
    /// Intrinsic hepatic clearance, µl/min/10⁶ cells.
    pub clearance: f64,
    /// Caco-2 permeability, log scale.
    pub caco2: f64,
}

/// File column names bound to each field. Naming differs between versions
/// of the predicting tool, so every file may need its own map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub id: String,
    pub logp: String,
    pub clearance: String,
    pub caco2: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            id: "MoleculeID".into(),
            logp: "LogP_pred".into(),
            clearance: "Clint_pred".into(),
            caco2: "CACO2_pred".into(),
        }
    }
}

impl ColumnMap {
    /// Field names paired with mapped column names.
    pub fn bindings(&self) -> [(&'static str, &str); 4] {
        [
            ("id", &self.id),
            ("logp", &self.logp),
            ("clearance", &self.clearance),
            ("caco2", &self.caco2),
        ]
    }
}

/// Parsed records and the number of rows skipped for blank, non-numeric
/// or non-finite values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExternalProperties {
    pub records: Vec<ExternalPropertyRecord>,
    pub skipped: usize,
}

pub fn parse_opera_csv(path: &Path, map: &ColumnMap) -> Result<ExternalProperties, ReportError> {
    let file = File::open(path).map_err(|e| ReportError::io(path, e))?;
    read_opera_csv(file, map)
}

pub fn read_opera_csv<R: Read>(input: R, map: &ColumnMap) -> Result<ExternalProperties, ReportError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let headers = reader.headers()?.clone();
    let mut cols = [0usize; 4];
    for (slot, (field, column)) in cols.iter_mut().zip(map.bindings()) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == column)
            .ok_or_else(|| ReportError::MissingMappedColumn {
                field: field.to_string(),
                column: column.to_string(),
            })?;
    }
    let mut out = ExternalProperties::default();
    for row in reader.records() {
        let row = row?;
        let cell = |k: usize| row.get(cols[k]).map(str::trim).filter(|s| !s.is_empty());
        let number = |k: usize| cell(k).and_then(|s| s.parse::<f64>().ok()).filter(|v| v.is_finite());
        match (cell(0), number(1), number(2), number(3)) {
            (Some(id), Some(logp), Some(clearance), Some(caco2)) => {
                out.records.push(ExternalPropertyRecord {
                    id: id.to_string(),
                    logp,
                    clearance,
                    caco2,
                })
            }
            _ => out.skipped += 1,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map() -> ColumnMap {
        ColumnMap {
            id: "id".into(),
            logp: "LogP_pred".into(),
            clearance: "Clint".into(),
            caco2: "Caco2".into(),
        }
    }

    #[test]
    fn mapped_columns() {
        let text = "id,LogP_pred,Clint,Caco2\ngen1-0,1.5,20.0,-5.2\n";
        let p = read_opera_csv(text.as_bytes(), &map()).unwrap();
        assert_eq!(
            p.records,
            vec![ExternalPropertyRecord {
                id: "gen1-0".into(),
                logp: 1.5,
                clearance: 20.0,
                caco2: -5.2,
            }]
        );
    }

    #[test]
    fn missing_column_is_named() {
        let text = "id,LogP_pred,Clint\n";
        let err = read_opera_csv(text.as_bytes(), &map()).unwrap_err();
        assert!(matches!(err, ReportError::MissingMappedColumn { ref column, .. } if column == "Caco2"));
    }

    #[test]
    fn blank_cell_skips_row() {
        let text = "id,LogP_pred,Clint,Caco2\na,1,2,3\nb,,2,3\nc,1,NaN,3\n";
        let p = read_opera_csv(text.as_bytes(), &map()).unwrap();
        assert_eq!((p.records.len(), p.skipped), (1, 2));
    }
}
