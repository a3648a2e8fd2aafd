//! Context inference: open-ended experiment designs for a given direction of
//! treatment effect. Outputs are stored verbatim; the keyword coverage score
//! is a heuristic aid, not a quality judgement.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{fmt_opt, session_status, Artifact, SessionCounts, Table, TaskDetails, TaskOutcome};
use crate::bench::raw::RawCompletion;
use crate::bench::source::Query;
use crate::bench::{BenchError, TaskId};
use crate::datasets::prompts::context_inference_prompt;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionResult {
    pub direction: String,
    pub runs: usize,
    pub completed: usize,
    /// Mean keyword coverage over completed runs; `None` without keywords.
    pub coverage: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContextResults {
    pub directions: Vec<DirectionResult>,
}

/// Fraction of `keywords` found case-insensitively in `text`; `None` for an
/// empty keyword list.
pub fn keyword_coverage(text: &str, keywords: &[String]) -> Option<f64> {
    let wanted: Vec<String> = keywords
        .iter()
        .map(|k| k.trim().to_lowercase())
        .filter(|k| !k.is_empty())
        .collect();
    if wanted.is_empty() {
        return None;
    }
    let haystack = text.to_lowercase();
    let hits = wanted.iter().filter(|k| haystack.contains(k.as_str())).count();
    Some(hits as f64 / wanted.len() as f64)
}

/// Word substituted into the prompt for a direction id: `increase` reads
/// "increased", `decrease` reads "decreased"; other values pass through.
pub fn direction_phrase(direction: &str) -> &str {
    match direction {
        "increase" => "increased",
        "decrease" => "decreased",
        other => other,
    }
}

pub fn plan(directions: &[String], repetitions: usize) -> Vec<Query> {
    directions
        .iter()
        .map(|d| Query::new(d.clone(), None, context_inference_prompt(direction_phrase(d)), repetitions))
        .collect()
}

fn file_stem(direction: &str) -> String {
    direction
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

pub fn score(
    directions: &[String],
    keywords: &[String],
    records: &[RawCompletion],
    model: &str,
) -> Result<TaskOutcome, BenchError> {
    let mut by_key: BTreeMap<&str, Vec<&RawCompletion>> = BTreeMap::new();
    for r in records {
        by_key.entry(r.key.as_str()).or_default().push(r);
    }
    let mut counts = SessionCounts::default();
    let mut artifacts = Vec::new();
    let mut results = Vec::new();
    for d in directions {
        let runs = by_key.get(d.as_str()).map(Vec::as_slice).unwrap_or_default();
        let mut coverages = Vec::new();
        let mut completed = 0;
        for r in runs {
            counts.issued += 1;
            match &r.text {
                Some(text) => {
                    counts.parsed += 1;
                    completed += 1;
                    artifacts.push(Artifact {
                        path: format!("context/{}_run{}.txt", file_stem(d), r.index + 1),
                        content: text.clone(),
                    });
                    coverages.extend(keyword_coverage(text, keywords));
                }
                None => counts.failed += 1,
            }
        }
        let coverage = (!coverages.is_empty()).then(|| coverages.iter().sum::<f64>() / coverages.len() as f64);
        results.push(DirectionResult {
            direction: d.clone(),
            runs: runs.len(),
            completed,
            coverage,
        });
    }

    let with_coverage = keyword_coverage("", keywords).is_some();
    let mut columns = vec!["Model", "Direction", "Runs", "Completed"];
    if with_coverage {
        columns.push("Keyword coverage (heuristic)");
    }
    let mut table = Table::new("context_inference", "Context inference runs", &columns);
    for r in &results {
        let mut row = vec![
            model.to_string(),
            r.direction.clone(),
            r.runs.to_string(),
            r.completed.to_string(),
        ];
        if with_coverage {
            row.push(fmt_opt(r.coverage));
        }
        table.push(row);
    }
    let mut notes = vec!["Completions are stored verbatim under context/ for qualitative review.".to_string()];
    if with_coverage {
        notes.push(format!(
            "Coverage is the fraction of {} reference keywords found case-insensitively in a completion, averaged over runs.",
            keywords.len()
        ));
    }
    Ok(TaskOutcome {
        task: TaskId::ContextInference,
        status: session_status(records),
        counts,
        tables: vec![table],
        histograms: Vec::new(),
        artifacts,
        notes,
        details: TaskDetails::Context(ContextResults { directions: results }),
        raw_log: None,
    })
}
