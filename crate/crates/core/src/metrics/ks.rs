//! Two-sample Kolmogorov–Smirnov test, plain and on binned ("smoothed")
//! values.
//!
//! The smoothed variant maps every observation `v` to its bin index
//! `floor(v / bin_width)` (bins aligned at 0) and runs the ordinary
//! two-sample test on the indices. The p-value is the asymptotic
//! Kolmogorov distribution evaluated at `sqrt(n m / (n + m)) * D`.

use serde::{Deserialize, Serialize};

use super::{names, EmpiricalSample, MetricError, MetricResult};

pub const DEFAULT_KS_BIN_WIDTH: f64 = 10.0;
const PASS_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi theta form converges quickly for small lambda.
        let coef = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let scale = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=64u32 {
            let odd = f64::from(2 * k - 1);
            let term = (-odd * odd * scale).exp();
            sum += term;
            if term < 1e-18 {
                break;
            }
        }
        (1.0 - coef * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=64u32 {
            let kf = f64::from(k);
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += sign * term;
            sign = -sign;
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// Two-sample KS statistic `sup |F_a - F_b|` with asymptotic p-value.
/// Both slices must be non-empty; they need not be sorted.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<KsOutcome, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::Empty("two_sample_ks"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (m, n) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut worst = 0usize;
    while i < m && j < n {
        let next = xs[i].min(ys[j]);
        while i < m && xs[i] == next {
            i += 1;
        }
        while j < n && ys[j] == next {
            j += 1;
        }
        worst = worst.max((i * n).abs_diff(j * m));
    }
    // once either sample is exhausted the gap only shrinks toward 0
    let statistic = worst as f64 / (m * n) as f64;
    let effective = (m * n) as f64 / (m + n) as f64;
    let p_value = kolmogorov_survival(effective.sqrt() * statistic);
    Ok(KsOutcome { statistic, p_value })
}

pub fn bin_index(value: f64, bin_width: f64) -> f64 {
    (value / bin_width).floor()
}

/// KS test on values binned at `bin_width`; `passed` means `p > 0.05`.
pub fn smoothed_ks_test(
    a: &EmpiricalSample,
    b: &EmpiricalSample,
    bin_width: f64,
) -> Result<MetricResult, MetricError> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(MetricError::InvalidArgument(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let binned = |s: &EmpiricalSample| -> Vec<f64> { s.values().iter().map(|&v| bin_index(v, bin_width)).collect() };
    let outcome = two_sample_ks(&binned(a), &binned(b))?;
    Ok(MetricResult::test(
        names::SMOOTHED_KS,
        outcome.statistic,
        outcome.p_value,
        outcome.p_value > PASS_LEVEL,
    ))
}
