use serde::{Deserialize, Serialize};

use super::{EmpiricalSample, MetricError};

/// Bin counts over half-open bins `[e_i, e_{i+1})`; the last bin is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl HistogramSpec {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.bin_edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &c)| (w[0], w[1], c))
    }
}

pub fn histogram(sample: &EmpiricalSample, bin_edges: &[f64]) -> Result<HistogramSpec, MetricError> {
    if bin_edges.len() < 2 {
        return Err(MetricError::InvalidArgument("need at least two bin edges".into()));
    }
    if bin_edges.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(MetricError::InvalidArgument("bin edges must be strictly increasing".into()));
    }
    let low = bin_edges[0];
    let high = bin_edges[bin_edges.len() - 1];
    let bins = bin_edges.len() - 1;
    let mut counts = vec![0u64; bins];
    for &v in sample.values() {
        if v < low || v > high {
            return Err(MetricError::OutOfRange { value: v, low, high });
        }
        // number of edges <= v, minus one, is the bin of v
        let idx = bin_edges.partition_point(|&e| e <= v).saturating_sub(1).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(HistogramSpec {
        bin_edges: bin_edges.to_vec(),
        counts,
    })
}

/// Edges covering the integer action range `[min, max]`.
///
/// With `width == 1` every integer gets its own bin, centred on it
/// (`min - 0.5, min + 0.5, ..., max + 0.5`). Otherwise edges start at `min`
/// and step by `width` until they reach `max`.
pub fn default_bin_edges(min: i64, max: i64, width: u32) -> Vec<f64> {
    let width = i64::from(width.max(1));
    if width == 1 {
        return (min..=max + 1).map(|e| e as f64 - 0.5).collect();
    }
    let mut edges = vec![min as f64];
    let mut edge = min;
    while edge < max {
        edge += width;
        edges.push(edge as f64);
    }
    if edges.len() == 1 {
        edges.push((min + width) as f64);
    }
    edges
}
