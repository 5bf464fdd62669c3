//! CSV layouts for generated molecules and per-generation statistics.
//! Reals are written with four decimals; absent values are empty cells.

use std::collections::HashMap;
use std::io::{Read, Write};

use super::batch::GenerationStats;
use super::grow::GenerationRecord;
use super::PipelineError;
use crate::properties::DescriptorVector;

pub const RECORD_COLUMNS: [&str; 14] = [
    "generation",
    "smiles",
    "valid",
    "contains_fragment",
    "length",
    "qed",
    "mw",
    "alogp",
    "hba",
    "hbd",
    "psa",
    "rotb",
    "arom",
    "alerts",
];

pub const STATS_COLUMNS: [&str; 6] = [
    "generation",
    "count",
    "validity_rate",
    "uniqueness_rate",
    "mean_qed",
    "mean_qed_valid_unique",
];

pub(crate) fn fixed4(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.4}")).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> PipelineError {
    PipelineError::Csv {
        path: String::new(),
        source: e,
    }
}

pub fn write_records_csv<W: Write>(out: W, records: &[GenerationRecord]) -> Result<(), PipelineError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_COLUMNS).map_err(csv_err)?;
    for r in records {
        let d = r.descriptors;
        let count = |f: fn(&DescriptorVector) -> u32| d.as_ref().map(|d| f(d).to_string()).unwrap_or_default();
        w.write_record([
            r.generation.to_string(),
            r.smiles.clone(),
            r.valid.to_string(),
            r.contains_fragment.map(|b| b.to_string()).unwrap_or_default(),
            r.length.to_string(),
            fixed4(r.qed),
            fixed4(d.map(|d| d.mw)),
            fixed4(d.map(|d| d.alogp)),
            count(|d| d.hba),
            count(|d| d.hbd),
            fixed4(d.map(|d| d.psa)),
            count(|d| d.rotb),
            count(|d| d.arom),
            count(|d| d.alerts),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

/// Reads records back; `index` is the row's position within its generation.
pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<GenerationRecord>, PipelineError> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers().map_err(csv_err)?.clone();
    let col: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    for name in RECORD_COLUMNS {
        if !col.contains_key(name) {
            return Err(PipelineError::MissingColumn(name.to_string()));
        }
    }
    let mut next_index: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let bad = |what: &str| PipelineError::MalformedRecord {
            line: line + 2,
            reason: what.to_string(),
        };
        let cell = |name: &str| row.get(col[name]).unwrap_or("").trim();
        let int = |name: &str| cell(name).parse::<usize>().map_err(|_| bad(name));
        let real = |name: &str| -> Result<Option<f64>, PipelineError> {
            match cell(name) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(name)),
            }
        };
        let flag = |name: &str| -> Result<Option<bool>, PipelineError> {
            match cell(name) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(name)),
            }
        };
        let generation = int("generation")?;
        let slot = next_index.entry(generation).or_insert(0);
        let index = *slot;
        *slot += 1;
        let valid = flag("valid")?.ok_or_else(|| bad("valid"))?;
        let descriptors = if valid {
            let count = |name: &str| cell(name).parse::<u32>().map_err(|_| bad(name));
            let need = |name: &str| real(name)?.ok_or_else(|| bad(name));
            Some(DescriptorVector {
                mw: need("mw")?,
                alogp: need("alogp")?,
                hba: count("hba")?,
                hbd: count("hbd")?,
                psa: need("psa")?,
                rotb: count("rotb")?,
                arom: count("arom")?,
                alerts: count("alerts")?,
            })
        } else {
            None
        };
        out.push(GenerationRecord {
            generation,
            index,
            smiles: cell("smiles").to_string(),
            valid,
            contains_fragment: flag("contains_fragment")?,
            length: int("length")?,
            descriptors,
            qed: real("qed")?,
        });
    }
    Ok(out)
}

pub fn write_stats_csv<W: Write>(out: W, stats: &[GenerationStats]) -> Result<(), PipelineError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STATS_COLUMNS).map_err(csv_err)?;
    for s in stats {
        w.write_record([
            s.generation.to_string(),
            s.count.to_string(),
            fixed4(Some(s.validity_rate)),
            fixed4(Some(s.uniqueness_rate)),
            fixed4(s.mean_qed),
            fixed4(s.mean_qed_valid_unique),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::grow::{Seed, DEFAULT_SEED};
    use crate::properties::PropertyTables;

    fn records() -> Vec<GenerationRecord> {
        let frag = Seed::new(DEFAULT_SEED).unwrap().fragment().clone();
        let t = PropertyTables::builtin();
        vec![
            GenerationRecord::scored(1, 0, "COP(=O)(F)OC".into(), 9, &frag, t),
            GenerationRecord::scored(1, 1, "COP(=O)(F)C(".into(), 8, &frag, t),
            GenerationRecord::scored(2, 0, "COP(=O)(F)c1ccccc1".into(), 15, &frag, t),
        ]
    }

    #[test]
    fn empty_records_give_header_only() {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), RECORD_COLUMNS.join(",") + "\n");
    }

    #[test]
    fn records_round_trip_to_four_decimals() {
        let original = records();
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &original).unwrap();
        let back = read_records_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in original.iter().zip(&back) {
            assert_eq!((a.generation, a.index, &a.smiles, a.valid), (b.generation, b.index, &b.smiles, b.valid));
            assert_eq!((a.contains_fragment, a.length), (b.contains_fragment, b.length));
            let close = |x: Option<f64>, y: Option<f64>| match (x, y) {
                (Some(x), Some(y)) => (x - y).abs() <= 5e-5,
                (None, None) => true,
                _ => false,
            };
            assert!(close(a.qed, b.qed));
            assert!(close(a.descriptors.map(|d| d.mw), b.descriptors.map(|d| d.mw)));
            assert_eq!(a.descriptors.map(|d| d.rotb), b.descriptors.map(|d| d.rotb));
        }
    }

    #[test]
    fn stats_cells() {
        let s = GenerationStats {
            generation: 1,
            count: 4,
            validity_rate: 0.75,
            uniqueness_rate: 1.0,
            mean_qed: Some(0.66),
            mean_qed_valid_unique: None,
        };
        let mut buf = Vec::new();
        write_stats_csv(&mut buf, &[s]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "1,4,0.7500,1.0000,0.6600,");
    }
}
