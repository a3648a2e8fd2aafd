//! Game-play logs: `scenario,subject_id,action,session_id,timestamp`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::games::{validate_action, ActionValue, BehaviorSample, GameScenarioSpec, SampleSource, ScenarioId};

pub const GAME_LOG_COLUMNS: [&str; 5] = ["scenario", "subject_id", "action", "session_id", "timestamp"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameLogRecord {
    pub scenario: ScenarioId,
    pub subject_id: String,
    pub action: ActionValue,
    pub session_id: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowRejection {
    /// 1-based data row (the header is row 0).
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameLogLoad {
    pub records: Vec<GameLogRecord>,
    pub rejected: Vec<RowRejection>,
}

impl GameLogLoad {
    /// Group records into one human baseline per scenario.
    pub fn baselines(&self) -> BTreeMap<ScenarioId, BehaviorSample> {
        let mut grouped: BTreeMap<ScenarioId, Vec<ActionValue>> = BTreeMap::new();
        for r in &self.records {
            grouped.entry(r.scenario).or_default().push(r.action);
        }
        grouped
            .into_iter()
            .map(|(id, values)| {
                let sample = BehaviorSample::new(id, values, SampleSource::HumanLog).expect("grouped by scenario");
                (id, sample)
            })
            .collect()
    }
}

pub fn load_game_log(path: &Path, specs: &BTreeMap<ScenarioId, GameScenarioSpec>) -> Result<GameLogLoad, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_game_log(&text, specs)
}

/// Rows whose action is not an integer inside the scenario's action space
/// are rejected with their row number; an unknown scenario id fails the load.
pub fn parse_game_log(text: &str, specs: &BTreeMap<ScenarioId, GameScenarioSpec>) -> Result<GameLogLoad, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| DatasetError::Schema(e.to_string()))?.clone();
    let missing: Vec<String> = GAME_LOG_COLUMNS
        .iter()
        .filter(|c| !headers.iter().any(|h| h == **c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(DatasetError::MissingColumns(missing));
    }
    let idx = |name: &str| headers.iter().position(|h| h == name).expect("checked above");
    let (c_scenario, c_subject, c_action, c_session, c_time) =
        (idx("scenario"), idx("subject_id"), idx("action"), idx("session_id"), idx("timestamp"));

    let mut load = GameLogLoad {
        records: Vec::new(),
        rejected: Vec::new(),
    };
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| DatasetError::Schema(format!("row {row_no}: {e}")))?;
        let scenario: ScenarioId = row[c_scenario]
            .parse()
            .map_err(|_| DatasetError::Schema(format!("row {row_no}: unknown scenario id `{}`", &row[c_scenario])))?;
        let default_spec;
        let spec = match specs.get(&scenario) {
            Some(s) => s,
            None => {
                default_spec = GameScenarioSpec::default_for(scenario);
                &default_spec
            }
        };
        let action = match row[c_action].parse::<i64>() {
            Ok(v) => validate_action(spec, v).map_err(|e| e.to_string()),
            Err(_) => Err(format!("action `{}` is not an integer", &row[c_action])),
        };
        match action {
            Ok(action) => load.records.push(GameLogRecord {
                scenario,
                subject_id: row[c_subject].to_string(),
                action,
                session_id: row[c_session].to_string(),
                timestamp: row[c_time].to_string(),
            }),
            Err(reason) => load.rejected.push(RowRejection { row: row_no, reason }),
        }
    }
    Ok(load)
}
