use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DatasetError;

/// Seeded train/eval partition. The eval side holds `round(fraction * n)`
/// records; both sides keep the input order.
pub fn split_holdout<T: Clone>(records: &[T], fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<T>), DatasetError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(DatasetError::InvalidArgument(format!(
            "holdout fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let n = records.len();
    let eval_size = (fraction * n as f64).round() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut in_eval = vec![false; n];
    for &i in &order[..eval_size] {
        in_eval[i] = true;
    }
    let (mut train, mut eval) = (Vec::with_capacity(n - eval_size), Vec::with_capacity(eval_size));
    for (record, is_eval) in records.iter().zip(in_eval) {
        if is_eval {
            eval.push(record.clone());
        } else {
            train.push(record.clone());
        }
    }
    Ok((train, eval))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_fraction() {
        let items: Vec<u32> = (0..3003).collect();
        let (train, eval) = split_holdout(&items, 0.1, 1).unwrap();
        assert_eq!(eval.len(), 300);
        assert_eq!(train.len(), 2703);

        let survey: Vec<u32> = (0..19_630).collect();
        let (train, eval) = split_holdout(&survey, 0.1, 1).unwrap();
        assert_eq!(eval.len(), 1963);
        assert_eq!(train.len(), 17_667);
    }

    #[test]
    fn deterministic_and_partitioning() {
        let items: Vec<u32> = (0..500).collect();
        let a = split_holdout(&items, 0.25, 9).unwrap();
        assert_eq!(a, split_holdout(&items, 0.25, 9).unwrap());
        assert_ne!(a, split_holdout(&items, 0.25, 10).unwrap());
        let mut all: Vec<u32> = a.0.iter().chain(&a.1).copied().collect();
        all.sort();
        assert_eq!(all, items);
    }

    #[test]
    fn rejects_degenerate_fractions() {
        assert!(split_holdout(&[1, 2], 0.0, 0).is_err());
        assert!(split_holdout(&[1, 2], 1.0, 0).is_err());
    }
}
