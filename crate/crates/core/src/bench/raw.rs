//! Raw completion records, persisted as JSON lines before any parsing.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::client::ClientError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawErrorKind {
    /// Retries exhausted on transport errors or retryable statuses.
    Transport,
    /// Non-retryable rejection by the server.
    Request,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawError {
    pub kind: RawErrorKind,
    pub message: String,
}

impl From<&ClientError> for RawError {
    fn from(e: &ClientError) -> Self {
        let kind = match e {
            ClientError::Transport { .. } => RawErrorKind::Transport,
            ClientError::Request { .. } => RawErrorKind::Request,
            _ => RawErrorKind::Other,
        };
        RawError {
            kind,
            message: e.to_string(),
        }
    }
}

/// One session's outcome. `key` names the query (scenario, subject and
/// dimension, question, ...) and `index` the repetition within it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCompletion {
    pub task: String,
    pub key: String,
    pub index: usize,
    pub session_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<RawError>,
    pub attempt_count: u32,
    #[serde(default)]
    pub latency_ms: u64,
}

impl RawCompletion {
    pub fn is_success(&self) -> bool {
        self.text.is_some()
    }
}

/// Write records, one JSON object per line.
pub fn write_raw_log(path: &Path, records: &[RawCompletion]) -> Result<(), BenchError> {
    let file = std::fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut w = BufWriter::new(file);
    append_raw(&mut w, records).map_err(|e| BenchError::io(path, e))?;
    w.flush().map_err(|e| BenchError::io(path, e))
}

pub(crate) fn append_raw(w: &mut impl Write, records: &[RawCompletion]) -> std::io::Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(std::io::Error::other)?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_raw_log(path: &Path) -> Result<Vec<RawCompletion>, BenchError> {
    let file = std::fs::File::open(path).map_err(|e| BenchError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| BenchError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RawCompletion = serde_json::from_str(&line)
            .map_err(|e| BenchError::Replay(format!("{} line {}: {e}", path.display(), i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let recs = vec![
            RawCompletion {
                task: "ieo_contest".into(),
                key: "q1".into(),
                index: 0,
                session_id: "ieo_contest/q1/0".into(),
                text: Some("B\n".into()),
                error: None,
                attempt_count: 1,
                latency_ms: 12,
            },
            RawCompletion {
                task: "ieo_contest".into(),
                key: "q1".into(),
                index: 1,
                session_id: "ieo_contest/q1/1".into(),
                text: None,
                error: Some(RawError {
                    kind: RawErrorKind::Transport,
                    message: "timeout".into(),
                }),
                attempt_count: 4,
                latency_ms: 0,
            },
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        write_raw_log(&path, &recs).unwrap();
        assert_eq!(read_raw_log(&path).unwrap(), recs);
    }
}
