use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::PipelineError;
use crate::properties::{qed_of, PropertyTables};
use crate::smiles::{parse, validate};

/// Input file layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// `SMILES[<whitespace>name]` per line, `#` comments.
    Smi,
    /// Header row with a `smiles` column and optional `qed` and `id`.
    Csv,
}

impl CorpusFormat {
    /// Format named by a file extension (`smi` or `csv`).
    pub fn from_extension(path: &Path) -> Result<CorpusFormat, PipelineError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        ext.parse()
    }
}

impl std::str::FromStr for CorpusFormat {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<CorpusFormat, PipelineError> {
        match s.to_ascii_lowercase().as_str() {
            "smi" => Ok(CorpusFormat::Smi),
            "csv" => Ok(CorpusFormat::Csv),
            _ => Err(PipelineError::UnknownFormat(s.to_string())),
        }
    }
}

/// One screened-or-screenable molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRecord {
    pub smiles: String,
    pub id: Option<String>,
    pub qed: f64,
}

/// Records read from a file and the number of lines skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadedCorpus {
    pub records: Vec<CorpusRecord>,
    pub skipped: usize,
}

/// Reads a corpus. Lines whose SMILES does not parse, fails validation or
/// cannot be scored are skipped and counted. A `qed` column, when present
/// and numeric, is used as is; otherwise QED is computed.
pub fn load_corpus(
    path: &Path,
    format: CorpusFormat,
    tables: &PropertyTables,
) -> Result<LoadedCorpus, PipelineError> {
    let file = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    match format {
        CorpusFormat::Smi => read_smi(BufReader::new(file), path, tables),
        CorpusFormat::Csv => read_csv(file, path, tables),
    }
}

fn read_smi(
    reader: impl BufRead,
    path: &Path,
    tables: &PropertyTables,
) -> Result<LoadedCorpus, PipelineError> {
    let mut out = LoadedCorpus::default();
    for line in reader.lines() {
        let line = line.map_err(|e| PipelineError::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.splitn(2, char::is_whitespace);
        let smiles = fields.next().unwrap_or_default();
        let id = fields.next().map(str::trim).filter(|s| !s.is_empty());
        out.push(smiles, id.map(str::to_string), None, tables);
    }
    Ok(out)
}

fn read_csv(
    file: File,
    path: &Path,
    tables: &PropertyTables,
) -> Result<LoadedCorpus, PipelineError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| PipelineError::csv(path, e))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
    let smiles_col = column("smiles").ok_or_else(|| PipelineError::MissingColumn("smiles".into()))?;
    let (qed_col, id_col) = (column("qed"), column("id"));
    let mut out = LoadedCorpus::default();
    for row in reader.records() {
        let Ok(row) = row else {
            out.skipped += 1;
            continue;
        };
        let Some(smiles) = row.get(smiles_col).map(str::trim) else {
            out.skipped += 1;
            continue;
        };
        let id = id_col
            .and_then(|c| row.get(c))
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string);
        let qed = qed_col
            .and_then(|c| row.get(c))
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|q| *q > 0.0 && *q <= 1.0);
        out.push(smiles, id, qed, tables);
    }
    Ok(out)
}

impl LoadedCorpus {
    fn push(&mut self, smiles: &str, id: Option<String>, qed: Option<f64>, tables: &PropertyTables) {
        match score(smiles, tables) {
            Some(computed) => self.records.push(CorpusRecord {
                smiles: smiles.to_string(),
                id,
                qed: qed.unwrap_or(computed),
            }),
            None => self.skipped += 1,
        }
    }
}

/// QED of a SMILES string that parses and validates.
pub(crate) fn score(smiles: &str, tables: &PropertyTables) -> Option<f64> {
    let graph = parse(smiles).ok()?;
    if !validate(&graph).valid() {
        return None;
    }
    qed_of(&graph, tables).ok().map(|(_, q)| q)
}

/// Keeps records whose QED is strictly above `threshold`, in input order.
pub fn screen_corpus(records: Vec<CorpusRecord>, threshold: f64) -> Vec<CorpusRecord> {
    records.into_iter().filter(|r| r.qed > threshold).collect()
}
