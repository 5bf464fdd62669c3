use super::descriptors::{descriptors, DescriptorVector};
use super::tables::{DesirabilityParams, PropertyTables};
use super::PropertyError;
use crate::smiles::MolecularGraph;

const FLOOR: f64 = 1e-6;

/// Asymmetric double-sigmoid desirability, normalised by `dmax` and clamped
/// to `[1e-6, 1]`.
pub fn desirability(x: f64, p: &DesirabilityParams) -> f64 {
    let rise = 1.0 + (-(x - p.c + p.d / 2.0) / p.e).exp();
    let fall = 1.0 + (-(x - p.c - p.d / 2.0) / p.f).exp();
    let d = (p.a + p.b / rise * (1.0 - 1.0 / fall)) / p.dmax;
    if d.is_nan() {
        FLOOR
    } else {
        d.clamp(FLOOR, 1.0)
    }
}

/// Unweighted QED: the geometric mean of the eight desirabilities.
pub fn qed(v: &DescriptorVector, tables: &PropertyTables) -> f64 {
    qed_from(&v.values(), tables.desirability())
}

/// Geometric mean of the desirabilities of `values` under `params`.
pub fn qed_from(values: &[f64; 8], params: &[DesirabilityParams; 8]) -> f64 {
    let log_sum: f64 = values
        .iter()
        .zip(params)
        .map(|(x, p)| desirability(*x, p).ln())
        .sum();
    (log_sum / 8.0).exp().min(1.0)
}

/// Descriptors and QED of a molecule in one call.
pub fn qed_of(
    graph: &MolecularGraph,
    tables: &PropertyTables,
) -> Result<(DescriptorVector, f64), PropertyError> {
    let v = descriptors(graph, tables)?;
    Ok((v, qed(&v, tables)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> &'static [DesirabilityParams; 8] {
        PropertyTables::builtin().desirability()
    }

    /// Reference arithmetic of the double sigmoid without clamping.
    fn raw(x: f64, p: &DesirabilityParams) -> f64 {
        let e1 = 1.0 + (-1.0 * (x - p.c + p.d / 2.0) / p.e).exp();
        let e2 = 1.0 + (-1.0 * (x - p.c - p.d / 2.0) / p.f).exp();
        (p.a + p.b / e1 * (1.0 - 1.0 / e2)) / p.dmax
    }

    #[test]
    fn peak_is_one() {
        for p in params() {
            // Scan for the maximiser and compare with the clamped value there.
            let (lo, hi) = (p.c - 10.0 * (p.d + p.e + p.f), p.c + 10.0 * (p.d + p.e + p.f));
            let best = (0..=200_000)
                .map(|k| lo + (hi - lo) * k as f64 / 200_000.0)
                .max_by(|a, b| raw(*a, p).total_cmp(&raw(*b, p)))
                .unwrap();
            assert!((desirability(best, p) - 1.0).abs() < 1e-3, "{p:?}: {}", desirability(best, p));
        }
    }

    #[test]
    fn far_tails_are_clamped() {
        for p in params() {
            for x in [-1e300, -1e6, 1e6, 1e300, f64::INFINITY, f64::NEG_INFINITY] {
                let d = desirability(x, p);
                assert!((FLOOR..=1.0).contains(&d), "{x} -> {d}");
            }
        }
    }

    #[test]
    fn mw_desirability_matches_formula() {
        let p = &params()[0];
        assert!((desirability(305.0, p) - raw(305.0, p)).abs() < 1e-15);
    }

    #[test]
    fn geometric_mean_of_equal_terms() {
        // A flat desirability of 0.5 for every descriptor.
        let half = DesirabilityParams {
            a: 0.5,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            e: 1.0,
            f: 1.0,
            dmax: 1.0,
        };
        let one = DesirabilityParams { a: 1.0, ..half };
        let values = [100.0, 1.0, 1.0, 1.0, 10.0, 1.0, 1.0, 0.0];
        assert!((qed_from(&values, &[half; 8]) - 0.5).abs() < 1e-12);
        assert!((qed_from(&values, &[one; 8]) - 1.0).abs() < 1e-12);
    }
}
