//! Task orchestration: configuration, completion collection (live, replay or
//! empirical agent), raw-log persistence, scoring and report rendering.
//!
//! Every task follows the same three steps. It first plans a list of
//! [`Query`]s, then a [`CompletionSource`] turns them into
//! [`RawCompletion`]s that are written to `raw/<task>.jsonl`, and finally
//! the task scores those records. Scoring never touches the network, which
//! is what makes `--replay` reproduce a report byte for byte.

pub mod config;
pub mod raw;
pub mod report;
pub mod runner;
pub mod scorer;
pub mod source;
pub mod tasks;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{BenchConfig, RunOptions};
pub use raw::{read_raw_log, write_raw_log, RawCompletion, RawError, RawErrorKind};
pub use report::{render_report, BenchmarkReport};
pub use runner::{run_benchmark, RunMode, RunSummary, TaskSelection};
pub use scorer::{BleurtBridge, ExternalScorer, ScorerError};
pub use source::{CompletionSource, EmpiricalAgentSource, LiveSource, Query, ReplaySource, Sampling};
pub use tasks::{SessionCounts, TaskOutcome, TaskStatus};

/// The six benchmark tasks, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskId {
    GameDistributions,
    BigfivePrediction,
    AgeInference,
    ContextInference,
    WorkflowReasoning,
    IeoContest,
}

impl TaskId {
    pub const ALL: [TaskId; 6] = [
        TaskId::GameDistributions,
        TaskId::BigfivePrediction,
        TaskId::AgeInference,
        TaskId::ContextInference,
        TaskId::WorkflowReasoning,
        TaskId::IeoContest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskId::GameDistributions => "game_distributions",
            TaskId::BigfivePrediction => "bigfive_prediction",
            TaskId::AgeInference => "age_inference",
            TaskId::ContextInference => "context_inference",
            TaskId::WorkflowReasoning => "workflow_reasoning",
            TaskId::IeoContest => "ieo_contest",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TaskId::GameDistributions => "Economic game behavior distributions",
            TaskId::BigfivePrediction => "Big Five personality prediction",
            TaskId::AgeInference => "Age inference from personality scores",
            TaskId::ContextInference => "Context inference",
            TaskId::WorkflowReasoning => "Research workflow reasoning",
            TaskId::IeoContest => "Economics Olympiad questions",
        }
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskId {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown task `{s}`")))
    }
}

/// Process exit codes of `befm-bench`.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const DEGRADED: i32 = 3;
    pub const TRANSPORT: i32 = 4;
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("replay error: {0}")]
    Replay(String),
    #[error(transparent)]
    Dataset(#[from] crate::datasets::DatasetError),
    #[error("{task}: {message}")]
    Task { task: TaskId, message: String },
}

impl BenchError {
    pub(crate) fn io(path: &Path, err: impl fmt::Display) -> Self {
        BenchError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Dataset(_) => exit_code::CONFIG,
            BenchError::Io { .. } | BenchError::Replay(_) | BenchError::Task { .. } => exit_code::IO,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_ids_round_trip() {
        for t in TaskId::ALL {
            assert_eq!(t.as_str().parse::<TaskId>().unwrap(), t);
        }
        assert!("everything".parse::<TaskId>().is_err());
    }
}
