//! Behavior distributions in the seven game scenarios, compared with human
//! baselines by Wasserstein distance.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{fmt_num, fmt_opt, session_status, NamedHistogram, SessionCounts, Table, TaskDetails, TaskOutcome, TaskStatus};
use crate::bench::raw::RawCompletion;
use crate::bench::source::Query;
use crate::bench::{BenchError, TaskId};
use crate::games::{parse_game_response, BehaviorSample, GameError, GameScenarioSpec, ScenarioId};
use crate::metrics::{default_bin_edges, histogram, wasserstein_distance, EmpiricalSample, HistogramSpec};

const TASK: TaskId = TaskId::GameDistributions;

pub struct GameTaskData {
    pub specs: BTreeMap<ScenarioId, GameScenarioSpec>,
    pub baselines: BTreeMap<ScenarioId, BehaviorSample>,
    pub scenarios: Vec<ScenarioId>,
    pub sample_count: usize,
    pub bin_width: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub scenario: ScenarioId,
    pub counts: SessionCounts,
    pub wasserstein: Option<f64>,
    pub human_n: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameResults {
    pub scenarios: Vec<ScenarioResult>,
}

impl GameResults {
    pub fn get(&self, id: ScenarioId) -> Option<&ScenarioResult> {
        self.scenarios.iter().find(|s| s.scenario == id)
    }
}

/// Bin edges for a scenario: width 1 for the bomb game's box counts.
pub fn scenario_bin_edges(spec: &GameScenarioSpec, bin_width: u32) -> Vec<f64> {
    let width = if spec.id() == ScenarioId::Bomb { 1 } else { bin_width };
    default_bin_edges(spec.action_min(), spec.action_max(), width)
}

pub fn plan(data: &GameTaskData) -> Result<Vec<Query>, BenchError> {
    data.scenarios
        .iter()
        .map(|id| {
            let prompt = data.specs[id].render_prompt().map_err(|e| BenchError::Config(format!("games.{id}: {e}")))?;
            Ok(Query::new(id.as_str(), None, prompt, data.sample_count))
        })
        .collect()
}

pub fn score(data: &GameTaskData, records: &[RawCompletion], model: &str) -> Result<TaskOutcome, BenchError> {
    let mut by_key: BTreeMap<&str, Vec<&RawCompletion>> = BTreeMap::new();
    for r in records {
        by_key.entry(r.key.as_str()).or_default().push(r);
    }
    let task_err = |e: &dyn std::fmt::Display| BenchError::Task {
        task: TASK,
        message: e.to_string(),
    };

    let mut results = Vec::new();
    let mut histograms = Vec::new();
    let mut total = SessionCounts::default();
    for &id in &data.scenarios {
        let spec = &data.specs[&id];
        let baseline = &data.baselines[&id];
        let mut counts = SessionCounts::default();
        let mut values = Vec::new();
        for r in by_key.get(id.as_str()).map(Vec::as_slice).unwrap_or_default() {
            counts.issued += 1;
            let Some(text) = &r.text else {
                counts.failed += 1;
                continue;
            };
            match parse_game_response(spec, text) {
                Ok(v) => {
                    counts.parsed += 1;
                    values.push(v.value());
                }
                Err(GameError::OutOfRange { .. }) => counts.out_of_range += 1,
                Err(_) => counts.unparseable += 1,
            }
        }
        total.add(&counts);

        let edges = scenario_bin_edges(spec, data.bin_width);
        let human = baseline.to_empirical().map_err(|e| task_err(&e))?;
        histograms.push(NamedHistogram {
            name: format!("{id}_human"),
            histogram: histogram(&human, &edges).map_err(|e| task_err(&e))?,
        });
        let (wasserstein, failure) = if values.is_empty() {
            histograms.push(NamedHistogram {
                name: format!("{id}_model"),
                histogram: HistogramSpec {
                    counts: vec![0; edges.len() - 1],
                    bin_edges: edges,
                },
            });
            (None, Some("no parseable in-range responses".to_string()))
        } else {
            let model_sample = EmpiricalSample::from_ints("model", values.iter().copied()).map_err(|e| task_err(&e))?;
            histograms.push(NamedHistogram {
                name: format!("{id}_model"),
                histogram: histogram(&model_sample, &edges).map_err(|e| task_err(&e))?,
            });
            (Some(wasserstein_distance(&model_sample, &human).map_err(|e| task_err(&e))?), None)
        };
        results.push(ScenarioResult {
            scenario: id,
            counts,
            wasserstein,
            human_n: baseline.len(),
            failure,
        });
    }

    let mut wide = Table::new(
        "game_distributions",
        "Wasserstein distance between model and human action distributions",
        &std::iter::once("Model")
            .chain(data.scenarios.iter().map(|id| id.column_name()))
            .collect::<Vec<_>>(),
    );
    wide.push(
        std::iter::once(model.to_string())
            .chain(results.iter().map(|r| fmt_opt(r.wasserstein)))
            .collect(),
    );

    let mut detail = Table::new(
        "game_scenarios",
        "Per-scenario detail",
        &[
            "Scenario",
            "Action range",
            "Human n",
            "Model parsed",
            "Out of range",
            "Unparseable",
            "Failed",
            "W-distance",
            "Status",
        ],
    );
    for r in &results {
        let spec = &data.specs[&r.scenario];
        detail.push(vec![
            r.scenario.column_name().to_string(),
            format!("{}..={}", spec.action_min(), spec.action_max()),
            r.human_n.to_string(),
            r.counts.parsed.to_string(),
            r.counts.out_of_range.to_string(),
            r.counts.unparseable.to_string(),
            r.counts.failed.to_string(),
            r.wasserstein.map(fmt_num).unwrap_or_else(|| "n/a".into()),
            r.failure.clone().unwrap_or_else(|| "ok".into()),
        ]);
    }

    let mut status = session_status(records);
    if status == TaskStatus::Complete && results.iter().all(|r| r.failure.is_some()) {
        status = TaskStatus::Failed("no scenario produced parseable responses".into());
    }
    Ok(TaskOutcome {
        task: TASK,
        status,
        counts: total,
        tables: vec![wide, detail],
        histograms,
        artifacts: Vec::new(),
        notes: vec![format!(
            "Histogram bins have width {} (width 1 for Bomb box counts); out-of-range and unparseable replies are excluded.",
            data.bin_width
        )],
        details: TaskDetails::Games(GameResults { scenarios: results }),
        raw_log: None,
    })
}
