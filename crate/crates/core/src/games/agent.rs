//! Empirical agent: a stand-in "model" that replays recorded human actions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BehaviorSample, GameError, SampleSource};
use crate::exec::{derive_seed, Exec};
use crate::metrics::{wasserstein_distance, wasserstein_noise_bound};

/// `n` i.i.d. draws with replacement from `sample`, reproducible under `seed`.
pub fn empirical_agent_sample(sample: &BehaviorSample, n: usize, seed: u64) -> Result<BehaviorSample, GameError> {
    if sample.is_empty() {
        return Err(GameError::InvalidArgument("empirical agent needs a non-empty sample".into()));
    }
    if n == 0 {
        return Err(GameError::InvalidArgument("empirical agent sample size must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source = sample.values();
    let draws = (0..n).map(|_| source[rng.random_range(0..source.len())]).collect();
    BehaviorSample::new(sample.scenario(), draws, SampleSource::EmpiricalAgent)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestOutcome {
    /// Distance bound that each trial should respect with the requested confidence.
    pub bound: f64,
    pub distances: Vec<f64>,
    pub within_bound: usize,
}

/// Resample `sample` `trials` times at size `n` and compare each resample to
/// the source with the W1 distance. Trial `t` uses a seed derived from
/// `(seed, t)`, so results do not depend on the execution strategy.
pub fn bootstrap_self_test(
    sample: &BehaviorSample,
    n: usize,
    trials: usize,
    seed: u64,
    confidence: f64,
    exec: Exec,
) -> Result<SelfTestOutcome, GameError> {
    let source = sample
        .to_empirical()
        .map_err(|e| GameError::InvalidArgument(e.to_string()))?;
    let bound = wasserstein_noise_bound(&source, n, confidence).map_err(|e| GameError::InvalidArgument(e.to_string()))?;
    let distances = exec
        .map_range(trials, |t| {
            let draw = empirical_agent_sample(sample, n, derive_seed(seed, &format!("trial-{t}")))?;
            let emp = draw.to_empirical().map_err(|e| GameError::InvalidArgument(e.to_string()))?;
            wasserstein_distance(&emp, &source).map_err(|e| GameError::InvalidArgument(e.to_string()))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let within_bound = distances.iter().filter(|&&d| d <= bound).count();
    Ok(SelfTestOutcome {
        bound,
        distances,
        within_bound,
    })
}
