//! Index-paired metrics: mean absolute error and Spearman rank correlation.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{EmpiricalSample, MetricError};

/// Sample sizes at or below this use the exact permutation null.
const EXACT_PERMUTATION_MAX_N: usize = 10;

fn check_paired(a: &EmpiricalSample, b: &EmpiricalSample) -> Result<(), MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

pub fn mean_absolute_error(pred: &EmpiricalSample, truth: &EmpiricalSample) -> Result<f64, MetricError> {
    check_paired(pred, truth)?;
    let total: f64 = pred
        .values()
        .iter()
        .zip(truth.values())
        .map(|(p, t)| (p - t).abs())
        .sum();
    Ok(total / pred.len() as f64)
}

/// 1-based ranks with ties replaced by their average rank.
pub fn rank_average(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end share ranks start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spearman {
    pub rho: f64,
    pub p_value: f64,
}

fn centered(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}

/// Spearman's rho with a two-sided p-value: exact permutation null for
/// `n <= 10`, Student-t approximation with `n - 2` degrees of freedom above.
pub fn spearman_correlation(pred: &EmpiricalSample, truth: &EmpiricalSample) -> Result<Spearman, MetricError> {
    check_paired(pred, truth)?;
    let n = pred.len();
    if n < 3 {
        return Err(MetricError::TooFew { need: 3, got: n });
    }
    let dx = centered(&rank_average(pred.values()));
    let dy = centered(&rank_average(truth.values()));
    let sxx: f64 = dx.iter().map(|v| v * v).sum();
    let syy: f64 = dy.iter().map(|v| v * v).sum();
    if sxx <= 0.0 {
        return Err(MetricError::UndefinedCorrelation("prediction"));
    }
    if syy <= 0.0 {
        return Err(MetricError::UndefinedCorrelation("ground truth"));
    }
    let sxy: f64 = dx.iter().zip(&dy).map(|(a, b)| a * b).sum();
    let rho = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let p_value = if n <= EXACT_PERMUTATION_MAX_N {
        permutation_p_value(&dx, &dy, sxy)
    } else {
        t_p_value(rho, n)
    };
    Ok(Spearman { rho, p_value })
}

fn t_p_value(rho: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let denom = 1.0 - rho * rho;
    if denom <= 0.0 {
        return 0.0;
    }
    let t = rho * (df / denom).sqrt();
    match StudentsT::new(0.0, 1.0, df) {
        Ok(dist) => (2.0 * dist.cdf(-t.abs())).clamp(0.0, 1.0),
        Err(_) => f64::NAN,
    }
}

/// Fraction of all `n!` rearrangements of `dy` whose cross-product is at
/// least as extreme as the observed one. Heap's algorithm, iterative.
fn permutation_p_value(dx: &[f64], dy: &[f64], observed: f64) -> f64 {
    let n = dy.len();
    let threshold = observed.abs() - 1e-9 * (1.0 + observed.abs());
    let mut perm = dy.to_vec();
    let mut counters = vec![0usize; n];
    let cross = |p: &[f64]| dx.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
    let mut total = 1u64;
    let mut extreme = u64::from(cross(&perm).abs() >= threshold);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            total += 1;
            if cross(&perm).abs() >= threshold {
                extreme += 1;
            }
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    extreme as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> EmpiricalSample {
        EmpiricalSample::new("t", v.to_vec()).unwrap()
    }

    #[test]
    fn mae_cases() {
        assert_eq!(mean_absolute_error(&s(&[30.0, 40.0]), &s(&[30.0, 40.0])).unwrap(), 0.0);
        assert_eq!(mean_absolute_error(&s(&[10.0, 50.0]), &s(&[50.0, 10.0])).unwrap(), 40.0);
        assert_eq!(mean_absolute_error(&s(&[30.0; 7]), &s(&[10.0; 7])).unwrap(), 20.0);
        assert!(matches!(
            mean_absolute_error(&s(&[1.0]), &s(&[1.0, 2.0])),
            Err(MetricError::LengthMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn average_ranks_for_ties() {
        assert_eq!(rank_average(&[10.0, 20.0, 20.0, 5.0]), vec![2.0, 3.5, 3.5, 1.0]);
    }

    #[test]
    fn spearman_monotone_cases() {
        let inc = s(&[1.0, 2.0, 3.0, 4.0]);
        let dec = s(&[9.0, 7.0, 3.0, 1.0]);
        assert_eq!(spearman_correlation(&inc, &inc).unwrap().rho, 1.0);
        assert_eq!(spearman_correlation(&inc, &dec).unwrap().rho, -1.0);
    }

    #[test]
    fn spearman_textbook_case() {
        // sum d^2 = 4 + 1 + 1 + 1 + 1 = 8 -> 1 - 48/120 = 0.6
        let r = spearman_correlation(&s(&[1.0, 2.0, 3.0, 4.0, 5.0]), &s(&[3.0, 1.0, 2.0, 5.0, 4.0])).unwrap();
        assert!((r.rho - 0.6).abs() < 1e-15);
        // enumerated separately: 42 of the 120 rank permutations have abs(rho) >= 0.6
        assert!((r.p_value - 42.0 / 120.0).abs() < 1e-12, "{}", r.p_value);
    }

    #[test]
    fn spearman_constant_is_undefined() {
        let r = spearman_correlation(&s(&[30.0, 30.0, 30.0]), &s(&[1.0, 2.0, 3.0]));
        assert_eq!(r, Err(MetricError::UndefinedCorrelation("prediction")));
        assert!(matches!(
            spearman_correlation(&s(&[1.0, 2.0]), &s(&[1.0, 2.0])),
            Err(MetricError::TooFew { .. })
        ));
    }

    #[test]
    fn spearman_large_n_uses_t_approximation() {
        let xs: Vec<f64> = (0..30).map(f64::from).collect();
        let ys: Vec<f64> = (0..30).map(|i| f64::from((i * 7) % 30)).collect();
        let r = spearman_correlation(&s(&xs), &s(&ys)).unwrap();
        assert!(r.p_value > 0.0 && r.p_value <= 1.0);
        let perfect = spearman_correlation(&s(&xs), &s(&xs)).unwrap();
        assert_eq!(perfect.p_value, 0.0);
    }
}
