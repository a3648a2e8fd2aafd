//! Alpaca-shaped training records (`instruction`, `input`, `output`).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bigfive::{score_bigfive, Dimension, SurveyRecord};
use super::gamelog::GameLogRecord;
use super::prompts::{self, DemographicTarget};
use super::workflow::WorkflowRecord;
use super::DatasetError;
use crate::games::{format_action, GameScenarioSpec, ScenarioId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlpacaEntry {
    pub instruction: String,
    pub input: String,
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlpacaTask {
    BigfiveTraits,
    /// Gender target, verbatim template.
    Demographics,
    /// Age target; same prompt with an age output format.
    DemographicsAge,
    IdeaGeneration,
    TitlePrediction,
    GameBehavior,
}

impl AlpacaTask {
    pub const ALL: [AlpacaTask; 6] = [
        AlpacaTask::BigfiveTraits,
        AlpacaTask::Demographics,
        AlpacaTask::DemographicsAge,
        AlpacaTask::IdeaGeneration,
        AlpacaTask::TitlePrediction,
        AlpacaTask::GameBehavior,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlpacaTask::BigfiveTraits => "bigfive_traits",
            AlpacaTask::Demographics => "demographics",
            AlpacaTask::DemographicsAge => "demographics_age",
            AlpacaTask::IdeaGeneration => "idea_generation",
            AlpacaTask::TitlePrediction => "title_prediction",
            AlpacaTask::GameBehavior => "game_behavior",
        }
    }
}

impl fmt::Display for AlpacaTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlpacaTask {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlpacaTask::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| DatasetError::InvalidArgument(format!("unknown alpaca task `{s}`")))
    }
}

/// Records handed to [`emit_alpaca`].
#[derive(Debug, Clone, Copy)]
pub enum AlpacaSource<'a> {
    Survey(&'a [SurveyRecord]),
    Workflow(&'a [WorkflowRecord]),
    GameLog {
        records: &'a [GameLogRecord],
        specs: &'a BTreeMap<ScenarioId, GameScenarioSpec>,
    },
}

impl AlpacaSource<'_> {
    fn kind(&self) -> &'static str {
        match self {
            AlpacaSource::Survey(_) => "survey",
            AlpacaSource::Workflow(_) => "workflow",
            AlpacaSource::GameLog { .. } => "game log",
        }
    }
}

pub fn emit_alpaca(task: AlpacaTask, source: AlpacaSource<'_>) -> Result<Vec<AlpacaEntry>, DatasetError> {
    match (task, source) {
        (AlpacaTask::BigfiveTraits, AlpacaSource::Survey(r)) => emit_bigfive_traits(r),
        (AlpacaTask::Demographics, AlpacaSource::Survey(r)) => emit_demographics(r, DemographicTarget::Gender),
        (AlpacaTask::DemographicsAge, AlpacaSource::Survey(r)) => emit_demographics(r, DemographicTarget::Age),
        (AlpacaTask::IdeaGeneration, AlpacaSource::Workflow(r)) => emit_idea_generation(r),
        (AlpacaTask::TitlePrediction, AlpacaSource::Workflow(r)) => emit_title_prediction(r),
        (AlpacaTask::GameBehavior, AlpacaSource::GameLog { records, specs }) => emit_game_behavior(records, specs),
        (task, source) => Err(DatasetError::InvalidArgument(format!(
            "task `{task}` cannot be built from {} records",
            source.kind()
        ))),
    }
}

/// One entry per subject and OCEAN dimension; output is the score in brackets.
pub fn emit_bigfive_traits(records: &[SurveyRecord]) -> Result<Vec<AlpacaEntry>, DatasetError> {
    let mut out = Vec::with_capacity(records.len() * 5);
    for r in records {
        let scores = score_bigfive(r)?;
        let instruction = prompts::bigfive_traits_instruction(&r.demographics);
        for dim in Dimension::ALL {
            out.push(AlpacaEntry {
                instruction: instruction.clone(),
                input: prompts::bigfive_traits_input(dim),
                output: format!("[{}]", scores.get(dim)),
            });
        }
    }
    Ok(out)
}

/// Subjects without a gender code are skipped for the gender target.
pub fn emit_demographics(records: &[SurveyRecord], target: DemographicTarget) -> Result<Vec<AlpacaEntry>, DatasetError> {
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        let answer = match target {
            DemographicTarget::Gender => match r.demographics.gender.filter(|g| (1..=3).contains(g)) {
                Some(g) => g.to_string(),
                None => continue,
            },
            DemographicTarget::Age => r.demographics.age.to_string(),
        };
        let scores = score_bigfive(r)?;
        out.push(AlpacaEntry {
            instruction: prompts::demographics_instruction(),
            input: prompts::demographics_input(&scores, target),
            output: format!("[{answer}]"),
        });
    }
    Ok(out)
}

fn require_output(index: usize, field: &str, value: &str) -> Result<String, DatasetError> {
    if value.trim().is_empty() {
        return Err(DatasetError::Record {
            index,
            message: format!("`{field}` is empty; alpaca output must be non-empty"),
        });
    }
    Ok(value.to_string())
}

pub fn emit_idea_generation(records: &[WorkflowRecord]) -> Result<Vec<AlpacaEntry>, DatasetError> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(AlpacaEntry {
                instruction: prompts::workflow_instruction(),
                input: prompts::idea_generation_input(r),
                output: require_output(i, "key_idea", &r.key_idea)?,
            })
        })
        .collect()
}

pub fn emit_title_prediction(records: &[WorkflowRecord]) -> Result<Vec<AlpacaEntry>, DatasetError> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(AlpacaEntry {
                instruction: prompts::workflow_instruction(),
                input: prompts::title_prediction_input(r),
                output: require_output(i, "title", &r.title)?,
            })
        })
        .collect()
}

/// Instruction is the rendered game prompt, output the bracketed action.
pub fn emit_game_behavior(
    records: &[GameLogRecord],
    specs: &BTreeMap<ScenarioId, GameScenarioSpec>,
) -> Result<Vec<AlpacaEntry>, DatasetError> {
    let mut prompts_by_id: BTreeMap<ScenarioId, (GameScenarioSpec, String)> = BTreeMap::new();
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        let (spec, prompt) = match prompts_by_id.entry(r.scenario) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(slot) => {
                let spec = specs
                    .get(&r.scenario)
                    .cloned()
                    .unwrap_or_else(|| GameScenarioSpec::default_for(r.scenario));
                let prompt = spec
                    .render_prompt()
                    .map_err(|e| DatasetError::InvalidArgument(format!("{}: {e}", r.scenario)))?;
                slot.insert((spec, prompt))
            }
        };
        out.push(AlpacaEntry {
            instruction: prompt.clone(),
            input: String::new(),
            output: format_action(spec, r.action.value()),
        });
    }
    Ok(out)
}

/// Write entries as a pretty-printed JSON array (UTF-8, LF line endings).
pub fn write_alpaca_json(entries: &[AlpacaEntry], path: &Path) -> Result<(), DatasetError> {
    let mut text = serde_json::to_string_pretty(entries).map_err(|e| DatasetError::Schema(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| DatasetError::io(path, e))
}
