use crate::error::{Error, Result};
use crate::learn::ArcStrengthTable;

const TIE_TOLERANCE: f64 = 1e-12;

/// `∫₀¹ |F̂(x) − p₀| dx`, where `F̂` is the empirical CDF of `strengths`
/// and `p₀` the fraction of strengths below `t`: the L1 distance to the
/// two-point 0/1 distribution that calling arcs with `s ≥ t` significant
/// would imply.
pub fn threshold_objective(strengths: &[f64], t: f64) -> f64 {
    let m = strengths.len() as f64;
    let mut sorted = strengths.to_vec();
    sorted.sort_by(f64::total_cmp);
    let p0 = sorted.iter().filter(|&&s| s < t).count() as f64 / m;

    let mut total = 0.0;
    let mut x = 0.0;
    let mut below = 0usize;
    let mut i = 0;
    while x < 1.0 {
        while i < sorted.len() && sorted[i] <= x {
            i += 1;
            below += 1;
        }
        let next = if i < sorted.len() { sorted[i].min(1.0) } else { 1.0 };
        total += (next - x) * (below as f64 / m - p0).abs();
        x = next;
    }
    total
}

/// Inclusion threshold from the strengths of every unordered pair.
pub fn optimal_threshold(table: &ArcStrengthTable) -> Result<f64> {
    optimal_threshold_from(&table.pair_strengths())
}

/// Minimizer of [`threshold_objective`] over the thresholds that give
/// distinct partitions: midpoints between consecutive distinct strengths,
/// the smallest strength when it is positive (every arc significant) and
/// 1 when no strength reaches 1 (no arc significant). Ties go to the
/// smaller threshold.
pub fn optimal_threshold_from(strengths: &[f64]) -> Result<f64> {
    if !strengths.iter().any(|&s| s > 0.0) {
        return Err(Error::EmptyStrengths);
    }
    let mut distinct = strengths.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();

    let mut candidates: Vec<f64> = distinct.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    if distinct[0] > 0.0 {
        candidates.push(distinct[0]);
    }
    if *distinct.last().unwrap() < 1.0 {
        candidates.push(1.0);
    }
    candidates.sort_by(f64::total_cmp);

    let mut best = (f64::INFINITY, 1.0);
    for t in candidates {
        let l1 = threshold_objective(strengths, t);
        if l1 < best.0 - TIE_TOLERANCE {
            best = (l1, t);
        }
    }
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable() {
        let t = optimal_threshold_from(&[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(t, 0.5);
        assert!(threshold_objective(&[1.0, 1.0, 0.0], t).abs() < 1e-15);
    }

    #[test]
    fn four_strengths() {
        let s = [0.9, 0.85, 0.1, 0.05];
        let t = optimal_threshold_from(&s).unwrap();
        assert!((t - 0.475).abs() < 1e-12);
        assert!((threshold_objective(&s, t) - 0.1).abs() < 1e-12);
        assert!((threshold_objective(&s, 0.875) - 0.275).abs() < 1e-12);
    }

    #[test]
    fn all_equal_includes_all() {
        assert_eq!(optimal_threshold_from(&[0.5; 6]).unwrap(), 0.5);
    }

    #[test]
    fn all_zero_is_an_error() {
        assert!(matches!(
            optimal_threshold_from(&[0.0, 0.0]),
            Err(Error::EmptyStrengths)
        ));
    }
}
