//! Big Five survey files in the public export's tab-separated layout.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use befm_core::datasets::bigfive::ipip_key;
use befm_core::datasets::{load_bigfive_csv, score_bigfive, split_holdout, Dimension};

pub const SYNTHETIC_ROWS: usize = 19_719;
pub const SYNTHETIC_DROPPED: usize = 89;

pub fn header() -> String {
    let mut cols: Vec<String> = ["race", "age", "engnat", "gender", "hand", "source", "country"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend(ipip_key().iter().map(|k| k.item.clone()));
    cols.join("\t")
}

/// A row answering every positively keyed item of a dimension with `plus`
/// and every reversed one with `6 - plus`, so each dimension sums to
/// `10 * plus`.
pub fn row(age: &str, gender: &str, per_dim: impl Fn(Dimension) -> u8) -> String {
    let mut cols: Vec<String> = ["3", age, "1", gender, "1", "1", "US"].iter().map(|s| s.to_string()).collect();
    for k in ipip_key() {
        let plus = per_dim(k.dimension);
        cols.push(if k.reversed { 6 - plus } else { plus }.to_string());
    }
    cols.join("\t")
}

/// 19,719 rows of which 89 are unusable: 40 implausible ages, 30 with an
/// unanswered item, 19 with an out-of-scale item.
pub fn write_synthetic(path: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(19_719);
    let mut lines = vec![header()];
    for i in 0..SYNTHETIC_ROWS {
        let age = rng.random_range(13..=100u32).to_string();
        let gender = rng.random_range(0..=3u8).to_string();
        let answers: Vec<u8> = (0..5).map(|_| rng.random_range(1..=5)).collect();
        let mut line = row(&age, &gender, |d| answers[Dimension::ALL.iter().position(|x| *x == d).unwrap()]);
        if i % 221 == 0 && i / 221 < SYNTHETIC_DROPPED {
            let k = i / 221;
            let mut cols: Vec<String> = line.split('\t').map(str::to_string).collect();
            match k {
                0..40 => cols[1] = if k % 2 == 0 { "999".into() } else { "7".into() },
                40..70 => cols[7 + k % 50] = "0".into(),
                _ => cols[7 + k % 50] = "9".into(),
            }
            line = cols.join("\t");
        }
        lines.push(line);
    }
    std::fs::write(path, lines.join("\n") + "\n").unwrap();
}

#[derive(Debug)]
pub struct PipelineSummary {
    pub rows_read: usize,
    pub kept: usize,
    pub eval: usize,
}

/// Load, score and split a survey file; every score must lie in [10, 50]
/// and the 10% holdout must be within one of `round(0.1 * kept)`.
pub fn check_pipeline(path: &Path) -> Result<PipelineSummary, String> {
    let load = load_bigfive_csv(path).map_err(|e| e.to_string())?;
    if load.rows_read != load.records.len() + load.dropped_total() {
        return Err("rows read != kept + dropped".into());
    }
    for r in &load.records {
        let s = score_bigfive(r).map_err(|e| e.to_string())?;
        if let Some(d) = Dimension::ALL.into_iter().find(|d| !(10..=50).contains(&s.get(*d))) {
            return Err(format!("{} {d} score {} off scale", r.subject_id, s.get(d)));
        }
    }
    let (train, eval) = split_holdout(&load.records, 0.1, 42).map_err(|e| e.to_string())?;
    if train.len() + eval.len() != load.records.len() {
        return Err("split lost records".into());
    }
    let expected = (0.1 * load.records.len() as f64).round() as usize;
    if eval.len().abs_diff(expected) > 1 {
        return Err(format!("eval size {} vs expected {expected}", eval.len()));
    }
    Ok(PipelineSummary {
        rows_read: load.rows_read,
        kept: load.records.len(),
        eval: eval.len(),
    })
}
