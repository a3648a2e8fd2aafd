//! Statistical comparison machinery used by every benchmark table.

mod histogram;
mod ks;
mod paired;
mod rouge;
mod wasserstein;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use histogram::{default_bin_edges, histogram, HistogramSpec};
pub use ks::{kolmogorov_survival, smoothed_ks_test, two_sample_ks, KsOutcome, DEFAULT_KS_BIN_WIDTH};
pub use paired::{mean_absolute_error, rank_average, spearman_correlation, Spearman};
pub use rouge::{rouge1_f1, tokenize};
pub use wasserstein::{wasserstein_distance, wasserstein_noise_bound};

/// Fixed metric names used in reports.
pub mod names {
    pub const WASSERSTEIN: &str = "wasserstein";
    pub const MAE: &str = "mae";
    pub const SPEARMAN: &str = "spearman";
    pub const SMOOTHED_KS: &str = "smoothed_ks";
    pub const ROUGE1: &str = "rouge1";
    pub const ACCURACY: &str = "accuracy";
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("{0}: sample is empty")]
    Empty(&'static str),
    #[error("sample contains a non-finite value ({0})")]
    NonFinite(f64),
    #[error("paired samples differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {need} paired observations, got {got}")]
    TooFew { need: usize, got: usize },
    #[error("correlation undefined: {0} has zero rank variance")]
    UndefinedCorrelation(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("value {value} lies outside histogram edges [{low}, {high}]")]
    OutOfRange { value: f64, low: f64, high: f64 },
}

/// An ordered, non-empty collection of finite real observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    label: String,
}

impl EmpiricalSample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self, MetricError> {
        if values.is_empty() {
            return Err(MetricError::Empty("EmpiricalSample"));
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(MetricError::NonFinite(bad));
        }
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn from_ints<I>(label: impl Into<String>, values: I) -> Result<Self, MetricError>
    where
        I: IntoIterator,
        I::Item: Into<i64>,
    {
        Self::new(label, values.into_iter().map(|v| v.into() as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// One cell of a results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl MetricResult {
    pub fn value(name: &str, value: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            p_value: None,
            passed: None,
        }
    }

    pub fn test(name: &str, statistic: f64, p_value: f64, passed: bool) -> Self {
        Self {
            name: name.to_string(),
            value: statistic,
            p_value: Some(p_value),
            passed: Some(passed),
        }
    }
}

/// Fraction of `true` outcomes.
pub fn accuracy(outcomes: &[bool]) -> Result<f64, MetricError> {
    if outcomes.is_empty() {
        return Err(MetricError::Empty("accuracy"));
    }
    let hits = outcomes.iter().filter(|&&b| b).count();
    Ok(hits as f64 / outcomes.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_rejects_empty_and_nan() {
        assert!(EmpiricalSample::new("x", vec![]).is_err());
        assert!(matches!(
            EmpiricalSample::new("x", vec![1.0, f64::NAN]),
            Err(MetricError::NonFinite(_))
        ));
        assert!(matches!(
            EmpiricalSample::new("x", vec![f64::INFINITY]),
            Err(MetricError::NonFinite(_))
        ));
    }

    #[test]
    fn accuracy_cases() {
        assert_eq!(accuracy(&[true; 4]).unwrap(), 1.0);
        let half: Vec<bool> = (0..10).map(|i| i % 2 == 0).collect();
        assert_eq!(accuracy(&half).unwrap(), 0.5);
        // 91 questions x 10 runs with 667 correct
        let mut outcomes = vec![false; 910];
        outcomes.iter_mut().take(667).for_each(|o| *o = true);
        let acc = accuracy(&outcomes).unwrap();
        assert!((acc - 0.733).abs() < 5e-4, "{acc}");
        assert!(matches!(accuracy(&[]), Err(MetricError::Empty(_))));
    }
}
