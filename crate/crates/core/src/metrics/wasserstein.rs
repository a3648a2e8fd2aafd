//! Order-1 Wasserstein distance between one-dimensional empirical
//! distributions with uniform weights.

use super::{EmpiricalSample, MetricError};

/// W1 distance computed as the integral of `|F_a(x) - F_b(x)|` over the
/// merged support.
pub fn wasserstein_distance(a: &EmpiricalSample, b: &EmpiricalSample) -> Result<f64, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::Empty("wasserstein_distance"));
    }
    let xs = a.sorted();
    let ys = b.sorted();
    Ok(cdf_gap_integral(&xs, &ys))
}

fn cdf_gap_integral(xs: &[f64], ys: &[f64]) -> f64 {
    let (m, n) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut prev = xs[0].min(ys[0]);
    let mut total = 0.0;
    let denom = (m * n) as f64;
    while i < m || j < n {
        let next = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        // F_a = i/m, F_b = j/n on [prev, next)
        let gap = ((i * n) as f64 - (j * m) as f64).abs() / denom;
        total += gap * (next - prev);
        while i < m && xs[i] == next {
            i += 1;
        }
        while j < n && ys[j] == next {
            j += 1;
        }
        prev = next;
    }
    total
}

/// Upper bound on the W1 distance between `source` and an i.i.d. resample of
/// size `n` drawn from it, holding with probability at least `confidence`.
///
/// The bound is `J / sqrt(n) + R * sqrt(ln(1 / (1 - confidence)) / (2 n))`,
/// where `J = ∫ sqrt(F (1 - F)) dx` over the source CDF bounds the expected
/// distance and `R` (the source range) is the bounded-difference constant of
/// the distance as a function of the resample (McDiarmid).
pub fn wasserstein_noise_bound(
    source: &EmpiricalSample,
    n: usize,
    confidence: f64,
) -> Result<f64, MetricError> {
    if n == 0 {
        return Err(MetricError::InvalidArgument("resample size must be >= 1".into()));
    }
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(MetricError::InvalidArgument(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let sorted = source.sorted();
    let len = sorted.len() as f64;
    let mut spread = 0.0;
    for (k, pair) in sorted.windows(2).enumerate() {
        let cdf = (k + 1) as f64 / len;
        spread += (cdf * (1.0 - cdf)).sqrt() * (pair[1] - pair[0]);
    }
    let range = sorted[sorted.len() - 1] - sorted[0];
    let n = n as f64;
    let tail = range * ((1.0 / (1.0 - confidence)).ln() / (2.0 * n)).sqrt();
    Ok(spread / n.sqrt() + tail)
}
