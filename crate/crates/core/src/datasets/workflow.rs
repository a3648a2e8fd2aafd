//! Research-workflow records (JSON lines).

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::DatasetError;

/// A publication summarised as context, key idea, method, outcome and
/// projected impact, plus its title.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkflowRecord {
    pub paper_id: String,
    pub title: String,
    pub context: String,
    pub key_idea: String,
    pub method: String,
    pub outcome: String,
    pub projected_impact: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
}

const REQUIRED: [&str; 7] = ["paper_id", "title", "context", "key_idea", "method", "outcome", "projected_impact"];

pub fn load_workflow_jsonl(path: &Path) -> Result<Vec<WorkflowRecord>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_workflow_jsonl(&text)
}

/// Parse one object per non-blank line. Errors carry the 0-based record index.
pub fn parse_workflow_jsonl(text: &str) -> Result<Vec<WorkflowRecord>, DatasetError> {
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let index = out.len();
        let value: Value = serde_json::from_str(line).map_err(|e| DatasetError::Record {
            index,
            message: format!("invalid JSON: {e}"),
        })?;
        let obj = value.as_object().ok_or_else(|| DatasetError::Record {
            index,
            message: "expected a JSON object".into(),
        })?;
        for field in REQUIRED {
            match obj.get(field) {
                Some(Value::String(_)) => {}
                Some(Value::Number(_)) if field == "paper_id" => {}
                Some(_) => {
                    return Err(DatasetError::Record {
                        index,
                        message: format!("field `{field}` must be a string"),
                    })
                }
                None => {
                    return Err(DatasetError::Record {
                        index,
                        message: format!("missing required field `{field}`"),
                    })
                }
            }
        }
        let text_field = |name: &str| match &obj[name] {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let record = WorkflowRecord {
            paper_id: text_field("paper_id"),
            title: text_field("title"),
            context: text_field("context"),
            key_idea: text_field("key_idea"),
            method: text_field("method"),
            outcome: text_field("outcome"),
            projected_impact: text_field("projected_impact"),
            split: obj.get("split").and_then(Value::as_str).map(str::to_string),
        };
        for (name, value) in [("title", &record.title), ("context", &record.context)] {
            if value.trim().is_empty() {
                return Err(DatasetError::Record {
                    index,
                    message: format!("field `{name}` is empty"),
                });
            }
        }
        out.push(record);
    }
    Ok(out)
}
