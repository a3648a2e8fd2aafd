//! Survey-based tasks: Big Five scores from demographics, and age from
//! Big Five scores.

use std::collections::HashMap;

use serde::Serialize;

use super::{fmt_num, fmt_opt, mean_all, session_status, PairedMetrics, SessionCounts, Table, TaskDetails, TaskOutcome};
use crate::bench::raw::RawCompletion;
use crate::bench::source::Query;
use crate::bench::{BenchError, TaskId};
use crate::datasets::prompts::{self, DemographicTarget};
use crate::datasets::{score_bigfive, Dimension, PersonalityScores, SurveyRecord};
use crate::games::parse_bracketed_integer;
use crate::metrics::DEFAULT_KS_BIN_WIDTH;

/// Valid range of a predicted dimension score.
pub const SCORE_RANGE: (i64, i64) = (10, 50);
/// Valid range of a predicted age.
pub const AGE_RANGE: (i64, i64) = (0, 120);

/// Evaluation subjects with their scored ground truth.
#[derive(Debug, Clone)]
pub struct SurveyEval {
    pub records: Vec<SurveyRecord>,
    pub scores: Vec<PersonalityScores>,
}

impl SurveyEval {
    pub fn new(records: Vec<SurveyRecord>) -> Result<Self, BenchError> {
        let scores = records.iter().map(score_bigfive).collect::<Result<Vec<_>, _>>()?;
        Ok(SurveyEval { records, scores })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionResult {
    pub dimension: Dimension,
    pub counts: SessionCounts,
    pub metrics: PairedMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyResults {
    /// One entry per OCEAN dimension for trait prediction; empty for age.
    pub dimensions: Vec<DimensionResult>,
    /// Age task metrics.
    pub age: Option<PairedMetrics>,
    pub aggregate_mae: Option<f64>,
    pub aggregate_rho: Option<f64>,
    pub aggregate_wasserstein: Option<f64>,
    /// Every dimension passes the binned KS test.
    pub ks_all_pass: Option<bool>,
    /// Every dimension's correlation is significant at 0.05.
    pub rho_all_significant: Option<bool>,
}

fn trait_key(pos: usize, subject: &str, dim: Dimension) -> String {
    format!("{pos}/{subject}/{}", dim.name())
}

fn age_key(pos: usize, subject: &str) -> String {
    format!("{pos}/{subject}")
}

pub fn plan_traits(eval: &SurveyEval) -> Vec<Query> {
    let mut out = Vec::with_capacity(eval.len() * 5);
    for (pos, r) in eval.records.iter().enumerate() {
        let system = prompts::bigfive_traits_instruction(&r.demographics);
        for dim in Dimension::ALL {
            out.push(Query::new(
                trait_key(pos, &r.subject_id, dim),
                Some(system.clone()),
                prompts::bigfive_traits_input(dim),
                1,
            ));
        }
    }
    out
}

pub fn plan_age(eval: &SurveyEval) -> Vec<Query> {
    eval.records
        .iter()
        .zip(&eval.scores)
        .enumerate()
        .map(|(pos, (r, s))| {
            Query::new(
                age_key(pos, &r.subject_id),
                Some(prompts::demographics_instruction()),
                prompts::demographics_input(s, DemographicTarget::Age),
                1,
            )
        })
        .collect()
}

/// Tally one reply; returns the prediction when it parses within `range`.
fn classify(record: Option<&RawCompletion>, range: (i64, i64), counts: &mut SessionCounts) -> Option<f64> {
    let record = record?;
    counts.issued += 1;
    let Some(text) = &record.text else {
        counts.failed += 1;
        return None;
    };
    match parse_bracketed_integer(text) {
        Some(v) if (range.0..=range.1).contains(&v) => {
            counts.parsed += 1;
            Some(v as f64)
        }
        Some(_) => {
            counts.out_of_range += 1;
            None
        }
        None => {
            counts.unparseable += 1;
            None
        }
    }
}

fn metric_err(task: TaskId) -> impl Fn(crate::metrics::MetricError) -> BenchError {
    move |e| BenchError::Task {
        task,
        message: e.to_string(),
    }
}

pub fn score_traits(eval: &SurveyEval, records: &[RawCompletion], model: &str) -> Result<TaskOutcome, BenchError> {
    let task = TaskId::BigfivePrediction;
    let index: HashMap<&str, &RawCompletion> = records.iter().map(|r| (r.key.as_str(), r)).collect();
    let mut dims = Vec::new();
    let mut total = SessionCounts::default();
    for dim in Dimension::ALL {
        let mut counts = SessionCounts::default();
        let (mut pred, mut truth) = (Vec::new(), Vec::new());
        for (pos, (r, s)) in eval.records.iter().zip(&eval.scores).enumerate() {
            let rec = index.get(trait_key(pos, &r.subject_id, dim).as_str()).copied();
            if let Some(p) = classify(rec, SCORE_RANGE, &mut counts) {
                pred.push(p);
                truth.push(f64::from(s.get(dim)));
            }
        }
        total.add(&counts);
        let metrics = PairedMetrics::compute(&pred, &truth, Some(DEFAULT_KS_BIN_WIDTH)).map_err(metric_err(task))?;
        dims.push(DimensionResult {
            dimension: dim,
            counts,
            metrics,
        });
    }

    let ks_all_pass = dims
        .iter()
        .map(|d| d.metrics.ks.as_ref().and_then(|k| k.passed))
        .collect::<Option<Vec<bool>>>()
        .map(|v| v.iter().all(|&p| p));
    let rho_all_significant = dims
        .iter()
        .map(|d| d.metrics.spearman.map(|s| s.p_value < 0.05))
        .collect::<Option<Vec<bool>>>()
        .map(|v| v.iter().all(|&p| p));
    let results = SurveyResults {
        aggregate_mae: mean_all(dims.iter().map(|d| d.metrics.mae)),
        aggregate_rho: mean_all(dims.iter().map(|d| d.metrics.spearman.map(|s| s.rho))),
        aggregate_wasserstein: mean_all(dims.iter().map(|d| d.metrics.wasserstein)),
        ks_all_pass,
        rho_all_significant,
        dimensions: dims,
        age: None,
    };

    let mut summary = Table::new(
        "bigfive_prediction",
        "Big Five prediction, mean over the five dimensions",
        &["Model", "MAE", "Spearman's corr", "W-distance", "Correlation significant (all p<0.05)", "KS pass (all five)"],
    );
    summary.push(vec![
        model.to_string(),
        fmt_opt(results.aggregate_mae),
        results.aggregate_rho.map(fmt_num).unwrap_or_else(|| "undefined".into()),
        fmt_opt(results.aggregate_wasserstein),
        yes_no(results.rho_all_significant),
        yes_no(results.ks_all_pass),
    ]);
    let mut detail = Table::new(
        "bigfive_dimensions",
        "Per-dimension detail",
        &[
            "Dimension",
            "Parsed",
            "Out of range",
            "Unparseable",
            "Failed",
            "MAE",
            "Spearman's corr",
            "p-value",
            "W-distance",
            "KS statistic",
            "KS p-value",
            "KS pass",
        ],
    );
    for d in &results.dimensions {
        let m = &d.metrics;
        detail.push(vec![
            d.dimension.title().to_string(),
            d.counts.parsed.to_string(),
            d.counts.out_of_range.to_string(),
            d.counts.unparseable.to_string(),
            d.counts.failed.to_string(),
            fmt_opt(m.mae),
            m.rho_cell(),
            m.p_cell(),
            fmt_opt(m.wasserstein),
            fmt_opt(m.ks.as_ref().map(|k| k.value)),
            fmt_opt(m.ks.as_ref().and_then(|k| k.p_value)),
            yes_no(m.ks.as_ref().and_then(|k| k.passed)),
        ]);
    }

    let mut notes = vec![format!(
        "{} evaluation subjects, one independent session per subject and dimension; predictions outside [{}, {}] are excluded.",
        eval.len(),
        SCORE_RANGE.0,
        SCORE_RANGE.1
    )];
    notes.extend(
        results
            .dimensions
            .iter()
            .filter_map(|d| d.metrics.spearman_note.as_ref().map(|n| format!("{}: Spearman {n}", d.dimension.title()))),
    );
    Ok(TaskOutcome {
        task,
        status: session_status(records),
        counts: total,
        tables: vec![summary, detail],
        histograms: Vec::new(),
        artifacts: Vec::new(),
        notes,
        details: TaskDetails::Survey(results),
        raw_log: None,
    })
}

pub fn score_age(eval: &SurveyEval, records: &[RawCompletion], model: &str) -> Result<TaskOutcome, BenchError> {
    let task = TaskId::AgeInference;
    let index: HashMap<&str, &RawCompletion> = records.iter().map(|r| (r.key.as_str(), r)).collect();
    let mut counts = SessionCounts::default();
    let (mut pred, mut truth) = (Vec::new(), Vec::new());
    for (pos, r) in eval.records.iter().enumerate() {
        let rec = index.get(age_key(pos, &r.subject_id).as_str()).copied();
        if let Some(p) = classify(rec, AGE_RANGE, &mut counts) {
            pred.push(p);
            truth.push(f64::from(r.demographics.age));
        }
    }
    let m = PairedMetrics::compute(&pred, &truth, None).map_err(metric_err(task))?;

    let mut table = Table::new(
        "age_inference",
        "Age inference from Big Five scores",
        &["Model", "MAE", "Spearman's corr", "p-value", "W-distance", "Parsed", "Excluded", "Failed"],
    );
    table.push(vec![
        model.to_string(),
        fmt_opt(m.mae),
        m.rho_cell(),
        m.p_cell(),
        fmt_opt(m.wasserstein),
        counts.parsed.to_string(),
        counts.excluded().to_string(),
        counts.failed.to_string(),
    ]);
    let mut notes = vec![format!(
        "{} evaluation subjects; predicted ages outside [{}, {}] are excluded.",
        eval.len(),
        AGE_RANGE.0,
        AGE_RANGE.1
    )];
    if let Some(n) = &m.spearman_note {
        notes.push(format!("Spearman {n}"));
    }
    Ok(TaskOutcome {
        task,
        status: session_status(records),
        counts,
        tables: vec![table],
        histograms: Vec::new(),
        artifacts: Vec::new(),
        notes,
        details: TaskDetails::Survey(SurveyResults {
            dimensions: Vec::new(),
            aggregate_mae: m.mae,
            aggregate_rho: m.spearman.map(|s| s.rho),
            aggregate_wasserstein: m.wasserstein,
            ks_all_pass: None,
            rho_all_significant: m.spearman.map(|s| s.p_value < 0.05),
            age: Some(m),
        }),
        raw_log: None,
    })
}

fn yes_no(v: Option<bool>) -> String {
    match v {
        Some(true) => "yes".into(),
        Some(false) => "no".into(),
        None => "n/a".into(),
    }
}
