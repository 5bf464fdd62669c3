use super::ReportError;

/// One docked pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DockingMode {
    pub mode: u32,
    /// Signed, kcal/mol; more negative binds tighter.
    pub affinity: f64,
    pub rmsd_lb: f64,
    pub rmsd_ub: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DockingResult {
    pub id: String,
    /// Modes 1, 2, ... in order.
    pub modes: Vec<DockingMode>,
}

impl DockingResult {
    /// Affinity of mode 1.
    pub fn best_affinity(&self) -> f64 {
        self.modes[0].affinity
    }

    /// Unsigned best affinity, as scores are usually quoted.
    pub fn best_magnitude(&self) -> f64 {
        self.best_affinity().abs()
    }
}

/// Reads the result table of a Vina log: a header line containing `mode`,
/// a dashed separator, then `mode affinity rmsd_lb rmsd_ub` rows. The table
/// ends at the first line that does not start with an integer.
pub fn parse_vina_log(id: &str, text: &str) -> Result<DockingResult, ReportError> {
    let malformed = |line: usize, reason: &str| ReportError::MalformedTable {
        line,
        reason: reason.to_string(),
    };
    let lines: Vec<&str> = text.lines().collect();
    let header = lines
        .iter()
        .position(|l| l.contains("mode"))
        .ok_or_else(|| malformed(1, "no header line containing \"mode\""))?;
    let separator = (header + 1..lines.len())
        .find(|&i| lines[i].trim_start().starts_with("---"))
        .ok_or_else(|| malformed(header + 1, "no dashed separator after the header"))?;
    let mut modes = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(separator + 1) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(mode) = fields.first().and_then(|f| f.parse::<u32>().ok()) else {
            break;
        };
        let numbers: Vec<f64> = fields[1..].iter().filter_map(|f| f.parse().ok()).collect();
        if fields.len() != 4 || numbers.len() != 3 || numbers.iter().any(|v| !v.is_finite()) {
            return Err(malformed(i + 1, "row is not `mode affinity rmsd_lb rmsd_ub`"));
        }
        if mode as usize != modes.len() + 1 {
            return Err(malformed(i + 1, "mode indices must run 1, 2, 3, ..."));
        }
        modes.push(DockingMode {
            mode,
            affinity: numbers[0],
            rmsd_lb: numbers[1],
            rmsd_ub: numbers[2],
        });
    }
    if modes.is_empty() {
        return Err(ReportError::NoResultRows);
    }
    Ok(DockingResult {
        id: id.to_string(),
        modes,
    })
}

/// Writes `result` as a Vina-style table that [`parse_vina_log`] reads back.
pub fn render_vina_table(result: &DockingResult) -> String {
    let mut out = String::from(
        "mode |   affinity | dist from best mode\n     | (kcal/mol) | rmsd l.b.| rmsd u.b.\n-----+------------+----------+----------\n",
    );
    for m in &result.modes {
        out.push_str(&format!(
            "{:>4} {:>12} {:>10.3} {:>10.3}\n",
            m.mode, m.affinity, m.rmsd_lb, m.rmsd_ub
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "\
mode |   affinity | dist from best mode
     | (kcal/mol) | rmsd l.b.| rmsd u.b.
-----+------------+----------+----------
   1       -5.3      0.000      0.000
   2       -4.1      1.912      2.803
Writing output ... done.
";

    #[test]
    fn reads_rows() {
        let r = parse_vina_log("m", TABLE).unwrap();
        assert_eq!(r.modes.len(), 2);
        assert_eq!((r.modes[0].mode, r.modes[0].affinity), (1, -5.3));
        assert_eq!(r.best_affinity(), -5.3);
        assert_eq!(r.best_magnitude(), 5.3);
        assert_eq!(r.modes[1].rmsd_ub, 2.803);
    }

    #[test]
    fn empty_text_is_malformed() {
        assert!(matches!(parse_vina_log("m", ""), Err(ReportError::MalformedTable { .. })));
    }

    #[test]
    fn header_without_rows() {
        let text = TABLE.lines().take(3).collect::<Vec<_>>().join("\n");
        assert!(matches!(parse_vina_log("m", &text), Err(ReportError::NoResultRows)));
    }

    #[test]
    fn gaps_in_mode_numbers_are_rejected() {
        let text = TABLE.replace("   2 ", "   3 ");
        assert!(matches!(parse_vina_log("m", &text), Err(ReportError::MalformedTable { line: 5, .. })));
    }

    #[test]
    fn short_row_is_rejected() {
        let text = TABLE.replace("1.912      2.803", "1.912");
        assert!(matches!(parse_vina_log("m", &text), Err(ReportError::MalformedTable { .. })));
    }
}
