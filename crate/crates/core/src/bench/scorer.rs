//! Client side of the external learned-metric bridge.
//!
//! The bridge is launched as `<command> --checkpoint PATH`, reads one
//! `{"id","candidate","reference"}` object per stdin line and answers each
//! with `{"id","score"}` or `{"id","error"}`, in order.

use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::thread;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScorerError {
    #[error("cannot start scorer `{command}`: {message}")]
    Spawn { command: String, message: String },
    #[error("scorer exited with {status}: {stderr}")]
    Exit { status: String, stderr: String },
    #[error("scorer protocol error: {0}")]
    Protocol(String),
    #[error("scorer rejected request {id}: {message}")]
    Rejected { id: String, message: String },
}

/// A similarity metric computed outside the process.
pub trait ExternalScorer {
    /// Score `(candidate, reference)` pairs; one score per pair, in order.
    fn score_pairs(&self, pairs: &[(String, String)]) -> Result<Vec<f64>, ScorerError>;

    /// Label for the report (metric and checkpoint).
    fn describe(&self) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BleurtBridge {
    command: Vec<String>,
    checkpoint: String,
}

impl BleurtBridge {
    /// `command` is the program followed by any leading arguments.
    pub fn new(command: Vec<String>, checkpoint: impl Into<String>) -> Self {
        BleurtBridge {
            command,
            checkpoint: checkpoint.into(),
        }
    }

    pub fn checkpoint(&self) -> &str {
        &self.checkpoint
    }
}

impl ExternalScorer for BleurtBridge {
    fn score_pairs(&self, pairs: &[(String, String)]) -> Result<Vec<f64>, ScorerError> {
        let (program, args) = self.command.split_first().ok_or_else(|| ScorerError::Spawn {
            command: String::new(),
            message: "empty command".into(),
        })?;
        let mut child = Command::new(program)
            .args(args)
            .arg("--checkpoint")
            .arg(&self.checkpoint)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| ScorerError::Spawn {
                command: self.command.join(" "),
                message: e.to_string(),
            })?;

        let mut stdin = child.stdin.take().expect("piped stdin");
        let lines: Vec<String> = pairs
            .iter()
            .enumerate()
            .map(|(i, (c, r))| json!({"id": i.to_string(), "candidate": c, "reference": r}).to_string())
            .collect();
        // Feed stdin from a separate thread so a bridge that answers line by
        // line cannot deadlock against a full pipe.
        let writer = thread::spawn(move || -> std::io::Result<()> {
            for line in lines {
                writeln!(stdin, "{line}")?;
            }
            stdin.flush()
        });

        let stdout = child.stdout.take().expect("piped stdout");
        let mut scores = Vec::with_capacity(pairs.len());
        let mut failure = None;
        for (i, line) in BufReader::new(stdout).lines().enumerate() {
            let line = line.map_err(|e| ScorerError::Protocol(e.to_string()))?;
            if failure.is_some() {
                continue;
            }
            if i >= pairs.len() {
                failure = Some(ScorerError::Protocol(format!("unexpected extra line {}", i + 1)));
                continue;
            }
            match parse_response(&line, &i.to_string()) {
                Ok(score) => scores.push(score),
                Err(e) => failure = Some(e),
            }
        }
        let write_result = writer.join().unwrap_or_else(|_| Err(std::io::Error::other("writer panicked")));
        let output = child.wait_with_output().map_err(|e| ScorerError::Protocol(e.to_string()))?;
        if !output.status.success() {
            return Err(ScorerError::Exit {
                status: output.status.to_string(),
                stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
            });
        }
        if let Some(e) = failure {
            return Err(e);
        }
        if let Err(e) = write_result {
            return Err(ScorerError::Protocol(format!("writing requests: {e}")));
        }
        if scores.len() != pairs.len() {
            return Err(ScorerError::Protocol(format!(
                "expected {} responses, got {}",
                pairs.len(),
                scores.len()
            )));
        }
        Ok(scores)
    }

    fn describe(&self) -> String {
        format!("BLEURT (checkpoint {})", self.checkpoint)
    }
}

fn parse_response(line: &str, expected_id: &str) -> Result<f64, ScorerError> {
    let v: Value = serde_json::from_str(line).map_err(|e| ScorerError::Protocol(format!("bad line `{line}`: {e}")))?;
    let id = match v.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => String::new(),
    };
    if let Some(err) = v.get("error") {
        let message = err.as_str().map(str::to_string).unwrap_or_else(|| err.to_string());
        return Err(ScorerError::Rejected { id, message });
    }
    if id != expected_id {
        return Err(ScorerError::Protocol(format!("expected id {expected_id}, got `{id}`")));
    }
    match v.get("score").and_then(Value::as_f64) {
        Some(s) if s.is_finite() => Ok(s),
        _ => Err(ScorerError::Protocol(format!("response {id} has no finite score"))),
    }
}
