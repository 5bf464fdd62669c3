//! Docking and QSAR ingestion, screening summaries, CSV and SVG output.

mod opera;
mod summary;
mod svg;
mod vina;

use std::fs::File;
use std::path::Path;

use thiserror::Error;

use crate::pipeline::{write_records_csv, GenerationRecord, PipelineError};

pub use opera::{parse_opera_csv, read_opera_csv, ColumnMap, ExternalProperties, ExternalPropertyRecord};
pub use summary::{summarize, write_summary_csv, GenerationSummary, SummaryTable, Thresholds};
pub use svg::{emit_scatter, render_scatter, Field};
pub use vina::{parse_vina_log, render_vina_table, DockingMode, DockingResult};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed docking table at line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },
    #[error("docking table has no result rows")]
    NoResultRows,
    #[error("column {column:?} mapped to {field} is not in the header")]
    MissingMappedColumn { field: String, column: String },
    #[error("no record has both plotted fields")]
    NoPlottableData,
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("I/O failure on {path}: {source}")]
    IoFailure {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

impl ReportError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> ReportError {
        ReportError::IoFailure {
            path: path.display().to_string(),
            source,
        }
    }
}

fn create(path: &Path) -> Result<File, ReportError> {
    File::create(path).map_err(|e| ReportError::io(path, e))
}

/// Writes generated records in the generation CSV layout.
pub fn emit_records_csv(records: &[GenerationRecord], path: &Path) -> Result<(), ReportError> {
    Ok(write_records_csv(create(path)?, records)?)
}

pub fn emit_summary_csv(table: &SummaryTable, path: &Path) -> Result<(), ReportError> {
    write_summary_csv(create(path)?, table)
}
