use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use super::opera::ExternalPropertyRecord;
use super::vina::DockingResult;
use super::ReportError;
use crate::pipeline::{fixed4, valid_unique, GenerationRecord};

/// Screening cut-offs. Property limits are strict upper bounds; the
/// affinity range is on magnitudes and inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub logp_below: f64,
    pub clearance_below: f64,
    pub caco2_below: f64,
    pub affinity_range: (f64, f64),
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            logp_below: 5.0,
            clearance_below: 300.0,
            caco2_below: 6.0,
            affinity_range: (4.0, 6.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationSummary {
    pub generation: usize,
    pub valid_unique: usize,
    pub mean_qed: Option<f64>,
}

/// Fractions cover external records whose id matches a generated record;
/// they are `None` when nothing joined.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub thresholds: Thresholds,
    pub generations: Vec<GenerationSummary>,
    pub joined: usize,
    pub unjoined: usize,
    pub logp_fraction: Option<f64>,
    pub clearance_fraction: Option<f64>,
    pub caco2_fraction: Option<f64>,
    /// Smallest and largest best-mode affinity magnitude, kcal/mol.
    pub affinity_magnitude: Option<(f64, f64)>,
    /// Ids whose magnitude falls outside `thresholds.affinity_range`.
    pub affinity_outliers: Vec<String>,
}

pub fn summarize(
    records: &[GenerationRecord],
    external: &[ExternalPropertyRecord],
    docking: &[DockingResult],
    thresholds: &Thresholds,
) -> SummaryTable {
    let mut by_generation: BTreeMap<usize, Vec<GenerationRecord>> = BTreeMap::new();
    for r in records {
        by_generation.entry(r.generation).or_default().push(r.clone());
    }
    let generations = by_generation
        .iter()
        .map(|(&generation, batch)| {
            let unique = valid_unique(batch);
            let qeds: Vec<f64> = unique.iter().filter_map(|r| r.qed).collect();
            GenerationSummary {
                generation,
                valid_unique: unique.len(),
                mean_qed: (!qeds.is_empty()).then(|| qeds.iter().sum::<f64>() / qeds.len() as f64),
            }
        })
        .collect();

    let ids: HashSet<String> = records.iter().map(GenerationRecord::id).collect();
    let joined: Vec<&ExternalPropertyRecord> = external.iter().filter(|e| ids.contains(&e.id)).collect();
    let fraction = |pass: &dyn Fn(&ExternalPropertyRecord) -> bool| {
        (!joined.is_empty())
            .then(|| joined.iter().filter(|e| pass(e)).count() as f64 / joined.len() as f64)
    };

    let magnitudes: Vec<f64> = docking.iter().map(DockingResult::best_magnitude).collect();
    let affinity_magnitude = magnitudes.iter().copied().fold(None, |acc, m| match acc {
        None => Some((m, m)),
        Some((lo, hi)) => Some((f64::min(lo, m), f64::max(hi, m))),
    });
    let (lo, hi) = thresholds.affinity_range;
    let affinity_outliers = docking
        .iter()
        .filter(|d| !(lo..=hi).contains(&d.best_magnitude()))
        .map(|d| d.id.clone())
        .collect();

    SummaryTable {
        thresholds: *thresholds,
        generations,
        joined: joined.len(),
        unjoined: external.len() - joined.len(),
        logp_fraction: fraction(&|e| e.logp < thresholds.logp_below),
        clearance_fraction: fraction(&|e| e.clearance < thresholds.clearance_below),
        caco2_fraction: fraction(&|e| e.caco2 < thresholds.caco2_below),
        affinity_magnitude,
        affinity_outliers,
    }
}

/// Writes the table as `metric,value` rows. Reals have four decimals;
/// affinities are unsigned magnitudes in kcal/mol.
pub fn write_summary_csv<W: Write>(out: W, table: &SummaryTable) -> Result<(), ReportError> {
    let t = &table.thresholds;
    let mut rows: Vec<(String, String)> = Vec::new();
    for g in &table.generations {
        rows.push((format!("valid_unique_gen{}", g.generation), g.valid_unique.to_string()));
        rows.push((format!("mean_qed_gen{}", g.generation), fixed4(g.mean_qed)));
    }
    rows.push(("joined_external_records".into(), table.joined.to_string()));
    rows.push(("unjoined_external_records".into(), table.unjoined.to_string()));
    rows.push((format!("fraction_logp_below_{}", t.logp_below), fixed4(table.logp_fraction)));
    rows.push((
        format!("fraction_clearance_below_{}", t.clearance_below),
        fixed4(table.clearance_fraction),
    ));
    rows.push((format!("fraction_caco2_below_{}", t.caco2_below), fixed4(table.caco2_fraction)));
    let (lo, hi) = table.affinity_magnitude.unzip();
    rows.push(("affinity_magnitude_min_kcal_per_mol".into(), fixed4(lo)));
    rows.push(("affinity_magnitude_max_kcal_per_mol".into(), fixed4(hi)));
    rows.push((
        format!("affinity_outside_{}_{}", t.affinity_range.0, t.affinity_range.1),
        table.affinity_outliers.join(";"),
    ));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["metric", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::vina::DockingMode;

    fn record(generation: usize, index: usize, smiles: &str, qed: Option<f64>) -> GenerationRecord {
        GenerationRecord {
            generation,
            index,
            smiles: smiles.into(),
            valid: qed.is_some(),
            contains_fragment: qed.map(|_| true),
            length: smiles.len(),
            descriptors: None,
            qed,
        }
    }

    fn external(id: &str, logp: f64) -> ExternalPropertyRecord {
        ExternalPropertyRecord {
            id: id.into(),
            logp,
            clearance: 10.0,
            caco2: 1.0,
        }
    }

    fn docked(id: &str, affinity: f64) -> DockingResult {
        DockingResult {
            id: id.into(),
            modes: vec![DockingMode {
                mode: 1,
                affinity,
                rmsd_lb: 0.0,
                rmsd_ub: 0.0,
            }],
        }
    }

    #[test]
    fn fractions_and_means() {
        let records = [
            record(1, 0, "A", Some(0.4)),
            record(1, 1, "A", Some(0.4)),
            record(1, 2, "B", Some(0.6)),
            record(2, 0, "C", None),
        ];
        let ext = [external("gen1-0", 4.9), external("gen1-2", 5.0), external("other", 1.0)];
        let s = summarize(&records, &ext, &[], &Thresholds::default());
        assert_eq!(s.generations[0].valid_unique, 2);
        assert!((s.generations[0].mean_qed.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(s.generations[1].mean_qed, None);
        assert_eq!((s.joined, s.unjoined), (2, 1));
        assert_eq!(s.logp_fraction, Some(0.5));
        assert_eq!(s.clearance_fraction, Some(1.0));
        assert_eq!(s.affinity_magnitude, None);
    }

    #[test]
    fn affinity_outliers() {
        let dock = [docked("gen1-0", -4.2), docked("gen1-1", -5.9), docked("sarin", -12.0)];
        let s = summarize(&[], &[], &dock, &Thresholds::default());
        assert_eq!(s.affinity_magnitude, Some((4.2, 12.0)));
        assert_eq!(s.affinity_outliers, vec!["sarin".to_string()]);
        assert_eq!(s.logp_fraction, None);
    }

    #[test]
    fn csv_cells() {
        let records = [record(1, 0, "A", Some(0.66))];
        let s = summarize(&records, &[external("gen1-0", 1.0)], &[docked("x", -5.0)], &Thresholds::default());
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("mean_qed_gen1,0.6600\n"));
        assert!(text.contains("fraction_logp_below_5,1.0000\n"));
        assert!(text.contains("affinity_magnitude_max_kcal_per_mol,5.0000\n"));
    }
}
