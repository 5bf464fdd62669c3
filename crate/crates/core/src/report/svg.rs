use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::ReportError;
use crate::pipeline::GenerationRecord;

/// A plottable per-molecule quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Mw,
    Alogp,
    Hba,
    Hbd,
    Psa,
    Rotb,
    Arom,
    Alerts,
    Qed,
}

impl Field {
    pub const ALL: [Field; 9] = [
        Field::Mw,
        Field::Alogp,
        Field::Hba,
        Field::Hbd,
        Field::Psa,
        Field::Rotb,
        Field::Arom,
        Field::Alerts,
        Field::Qed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::Mw => "mw",
            Field::Alogp => "alogp",
            Field::Hba => "hba",
            Field::Hbd => "hbd",
            Field::Psa => "psa",
            Field::Rotb => "rotb",
            Field::Arom => "arom",
            Field::Alerts => "alerts",
            Field::Qed => "qed",
        }
    }

    /// Axis label with units.
    pub fn label(self) -> &'static str {
        match self {
            Field::Mw => "MW (g/mol)",
            Field::Alogp => "ALOGP",
            Field::Hba => "HBA (count)",
            Field::Hbd => "HBD (count)",
            Field::Psa => "PSA (Å²)",
            Field::Rotb => "ROTB (count)",
            Field::Arom => "AROM (count)",
            Field::Alerts => "ALERTS (count)",
            Field::Qed => "QED",
        }
    }

    pub fn value(self, r: &GenerationRecord) -> Option<f64> {
        if self == Field::Qed {
            return r.qed;
        }
        let d = r.descriptors?;
        Some(match self {
            Field::Mw => d.mw,
            Field::Alogp => d.alogp,
            Field::Hba => d.hba as f64,
            Field::Hbd => d.hbd as f64,
            Field::Psa => d.psa,
            Field::Rotb => d.rotb as f64,
            Field::Arom => d.arom as f64,
            Field::Alerts => d.alerts as f64,
            Field::Qed => unreachable!(),
        })
    }
}

impl FromStr for Field {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Field, ReportError> {
        Field::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ReportError::UnknownField(s.to_string()))
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

/// Data extent widened by 5% of the span on each side. A zero span is
/// widened by 5% of the value, or by 0.05 around zero.
fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let pad = if span > 0.0 {
        0.05 * span
    } else if lo != 0.0 {
        0.05 * lo.abs()
    } else {
        0.05
    };
    (lo - pad, hi + pad)
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    padded(lo, hi)
}

/// Standalone SVG scatter of `y` against `x`, one circle per record that
/// has both values. Output depends only on the input.
pub fn render_scatter(records: &[GenerationRecord], x: Field, y: Field) -> Result<String, ReportError> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| Some((x.value(r)?, y.value(r)?)))
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .collect();
    if points.is_empty() {
        return Err(ReportError::NoPlottableData);
    }
    let (x0, x1) = extent(points.iter().map(|p| p.0));
    let (y0, y1) = extent(points.iter().map(|p| p.1));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let sx = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let sy = |v: f64| TOP + ph - (v - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (bottom, right) = (TOP + ph, LEFT + pw);
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT} {TOP}V{bottom}H{right}" fill="none" stroke="black"/>"#
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let (vx, vy) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(vx), sy(vy));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            tick(vx)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick(vy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        x.label()
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        y.label()
    );
    for (px, py) in &points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue" fill-opacity="0.6"/>"#,
            sx(*px),
            sy(*py)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn tick(v: f64) -> String {
    let t = format!("{v:.3}");
    let t = t.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}

pub fn emit_scatter(
    records: &[GenerationRecord],
    x: Field,
    y: Field,
    path: &Path,
) -> Result<(), ReportError> {
    let svg = render_scatter(records, x, y)?;
    std::fs::write(path, svg).map_err(|e| ReportError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::DescriptorVector;

    fn record(alogp: f64, qed: f64) -> GenerationRecord {
        GenerationRecord {
            generation: 1,
            index: 0,
            smiles: "C".into(),
            valid: true,
            contains_fragment: Some(true),
            length: 1,
            descriptors: Some(DescriptorVector {
                mw: 100.0,
                alogp,
                hba: 1,
                hbd: 0,
                psa: 9.0,
                rotb: 0,
                arom: 0,
                alerts: 0,
            }),
            qed: Some(qed),
        }
    }

    #[test]
    fn one_point_one_circle() {
        let svg = render_scatter(&[record(1.0, 0.5)], Field::Alogp, Field::Qed).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(">ALOGP<") && svg.contains(">QED<"));
    }

    #[test]
    fn deterministic() {
        let rs = [record(1.0, 0.5), record(-2.0, 0.7), record(3.5, 0.2)];
        assert_eq!(
            render_scatter(&rs, Field::Alogp, Field::Qed).unwrap(),
            render_scatter(&rs, Field::Alogp, Field::Qed).unwrap()
        );
    }

    #[test]
    fn margins() {
        assert_eq!(padded(0.0, 10.0), (-0.5, 10.5));
        assert_eq!(padded(2.0, 2.0), (1.9, 2.1));
    }

    #[test]
    fn nothing_to_plot() {
        let mut r = record(1.0, 0.5);
        r.qed = None;
        assert!(matches!(render_scatter(&[r], Field::Mw, Field::Qed), Err(ReportError::NoPlottableData)));
    }

    #[test]
    fn field_names() {
        assert_eq!("ALOGP".parse::<Field>().unwrap(), Field::Alogp);
        assert!("clint".parse::<Field>().is_err());
    }
}
