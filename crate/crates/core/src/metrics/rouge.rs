//! ROUGE-1 unigram-overlap F1.
//!
//! Tokenization lowercases and splits on every non-alphanumeric character.
//! No stemming and no stopword removal.

use std::collections::HashMap;

use super::MetricError;

pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn counts(tokens: &[String]) -> HashMap<&str, usize> {
    let mut map = HashMap::new();
    for t in tokens {
        *map.entry(t.as_str()).or_insert(0) += 1;
    }
    map
}

pub fn rouge1_f1(candidate: &str, reference: &str) -> Result<f64, MetricError> {
    let reference = tokenize(reference);
    if reference.is_empty() {
        return Err(MetricError::Empty("rouge1 reference"));
    }
    let candidate = tokenize(candidate);
    if candidate.is_empty() {
        return Ok(0.0);
    }
    let ref_counts = counts(&reference);
    let overlap: usize = counts(&candidate)
        .iter()
        .map(|(tok, &c)| c.min(ref_counts.get(tok).copied().unwrap_or(0)))
        .sum();
    if overlap == 0 {
        return Ok(0.0);
    }
    // 2PR / (P + R) with P = o/|c| and R = o/|r| reduces to 2o / (|c| + |r|)
    Ok(2.0 * overlap as f64 / (candidate.len() + reference.len()) as f64)
}
