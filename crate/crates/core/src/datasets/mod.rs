//! Data loading and training-data emission.

pub mod alpaca;
pub mod bigfive;
pub mod gamelog;
pub mod ieo;
pub mod prompts;
pub mod split;
pub mod workflow;

use std::path::Path;

use thiserror::Error;

pub use alpaca::{emit_alpaca, write_alpaca_json, AlpacaEntry, AlpacaSource, AlpacaTask};
pub use bigfive::{
    load_bigfive_csv, parse_bigfive, score_bigfive, BigFiveLoad, Demographics, Dimension, DropReason,
    PersonalityScores, SurveyRecord,
};
pub use gamelog::{load_game_log, parse_game_log, GameLogLoad, GameLogRecord};
pub use ieo::{load_ieo_json, parse_ieo_json, ChoiceLetter, ContestQuestion};
pub use prompts::DemographicTarget;
pub use split::split_holdout;
pub use workflow::{load_workflow_jsonl, parse_workflow_jsonl, WorkflowRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatasetError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("missing required columns: {}", .0.join(", "))]
    MissingColumns(Vec<String>),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("record {index}: {message}")]
    Record { index: usize, message: String },
    #[error("subject {subject_id} is missing item {item}")]
    IncompleteRecord { subject_id: String, item: String },
    #[error("{0}")]
    InvalidArgument(String),
}

impl DatasetError {
    pub(crate) fn io(path: &Path, err: std::io::Error) -> Self {
        DatasetError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
