//! Where completions come from: the live endpoint, a previous run's raw
//! logs, or the empirical agent.

use std::collections::{BTreeMap, HashMap};
use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::raw::{append_raw, read_raw_log, RawCompletion, RawError};
use super::{BenchError, TaskId};
use crate::client::{ChatRequest, ModelClient, ModelEndpoint};
use crate::exec::{derive_seed, Exec};
use crate::games::{empirical_agent_sample, format_action, BehaviorSample, GameScenarioSpec, ScenarioId};

/// Sampling parameters sent with every request of a task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub temperature: f64,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
}

/// `n` independent sessions of one prompt pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub key: String,
    pub system_prompt: Option<String>,
    pub user_prompt: String,
    pub n: usize,
}

impl Query {
    pub fn new(key: impl Into<String>, system_prompt: Option<String>, user_prompt: impl Into<String>, n: usize) -> Self {
        Query {
            key: key.into(),
            system_prompt,
            user_prompt: user_prompt.into(),
            n,
        }
    }
}

pub(crate) fn session_id(task: TaskId, key: &str, index: usize) -> String {
    format!("{task}/{key}/{index}")
}

/// Turns planned queries into raw completions, in plan order (query by
/// query, repetition by repetition).
pub trait CompletionSource {
    fn collect(&self, task: TaskId, queries: &[Query], sampling: Sampling) -> Result<Vec<RawCompletion>, BenchError>;

    /// Label for the report header.
    fn describe(&self) -> String;
}

/// Queries the model endpoint and appends each finished chunk to
/// `raw/<task>.jsonl` before returning.
pub struct LiveSource {
    endpoint: ModelEndpoint,
    raw_dir: PathBuf,
    wire_log_dir: Option<PathBuf>,
    exec: Exec,
    chunk_size: usize,
}

impl LiveSource {
    pub fn new(endpoint: ModelEndpoint, raw_dir: impl Into<PathBuf>) -> Self {
        LiveSource {
            endpoint,
            raw_dir: raw_dir.into(),
            wire_log_dir: None,
            exec: Exec::default(),
            chunk_size: 256,
        }
    }

    /// Also log request/response bodies to `<dir>/<task>.wire.jsonl`.
    pub fn with_wire_log(mut self, dir: impl Into<PathBuf>) -> Self {
        self.wire_log_dir = Some(dir.into());
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    fn client(&self, task: TaskId, sampling: Sampling) -> Result<ModelClient, BenchError> {
        let mut endpoint = self.endpoint.with_temperature(sampling.temperature);
        endpoint.top_p = sampling.top_p;
        endpoint.max_tokens = sampling.max_tokens;
        let client = ModelClient::new(endpoint)
            .map_err(|e| BenchError::Config(e.to_string()))?
            .with_exec(self.exec);
        match &self.wire_log_dir {
            Some(dir) => {
                let path = dir.join(format!("{task}.wire.jsonl"));
                client.with_wire_log(&path).map_err(|e| BenchError::io(&path, e))
            }
            None => Ok(client),
        }
    }
}

impl CompletionSource for LiveSource {
    fn collect(&self, task: TaskId, queries: &[Query], sampling: Sampling) -> Result<Vec<RawCompletion>, BenchError> {
        let client = self.client(task, sampling)?;
        let path = self.raw_dir.join(format!("{task}.jsonl"));
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(true)
            .open(&path)
            .map_err(|e| BenchError::io(&path, e))?;
        let mut writer = BufWriter::new(file);

        let slots: Vec<(&Query, usize)> = queries.iter().flat_map(|q| (0..q.n).map(move |i| (q, i))).collect();
        let mut out = Vec::with_capacity(slots.len());
        for chunk in slots.chunks(self.chunk_size.max(1)) {
            let requests: Vec<ChatRequest> = chunk
                .iter()
                .map(|(q, i)| ChatRequest::new(q.system_prompt.clone(), q.user_prompt.clone(), session_id(task, &q.key, *i)))
                .collect();
            let outcomes = client.run_batch(&requests);
            let records: Vec<RawCompletion> = chunk
                .iter()
                .zip(outcomes)
                .map(|((q, i), outcome)| {
                    let session_id = session_id(task, &q.key, *i);
                    match outcome {
                        Ok(resp) => RawCompletion {
                            task: task.to_string(),
                            key: q.key.clone(),
                            index: *i,
                            session_id,
                            text: Some(resp.text),
                            error: None,
                            attempt_count: resp.attempt_count,
                            latency_ms: resp.latency_ms,
                        },
                        Err(fail) => RawCompletion {
                            task: task.to_string(),
                            key: q.key.clone(),
                            index: *i,
                            session_id,
                            text: None,
                            attempt_count: fail.error.attempts(),
                            error: Some(RawError::from(&fail.error)),
                            latency_ms: 0,
                        },
                    }
                })
                .collect();
            append_raw(&mut writer, &records)
                .and_then(|_| writer.flush())
                .map_err(|e| BenchError::io(&path, e))?;
            out.extend(records);
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("{} at {}", self.endpoint.model_name, self.endpoint.base_url)
    }
}

/// Reads `raw/<task>.jsonl` from a previous output directory (or the
/// directory itself) and never touches the network.
pub struct ReplaySource {
    dir: PathBuf,
    model_name: String,
}

impl ReplaySource {
    pub fn new(dir: impl Into<PathBuf>, model_name: impl Into<String>) -> Self {
        ReplaySource {
            dir: dir.into(),
            model_name: model_name.into(),
        }
    }

    fn log_path(&self, task: TaskId) -> Option<PathBuf> {
        let name = format!("{task}.jsonl");
        [self.dir.join("raw").join(&name), self.dir.join(&name)]
            .into_iter()
            .find(|p| p.is_file())
    }
}

impl CompletionSource for ReplaySource {
    fn collect(&self, task: TaskId, queries: &[Query], _sampling: Sampling) -> Result<Vec<RawCompletion>, BenchError> {
        let path = self
            .log_path(task)
            .ok_or_else(|| BenchError::Replay(format!("no raw log for {task} under {}", self.dir.display())))?;
        let mut by_slot: HashMap<(String, usize), RawCompletion> = read_raw_log(&path)?
            .into_iter()
            .map(|r| ((r.key.clone(), r.index), r))
            .collect();
        let mut out = Vec::new();
        for q in queries {
            for i in 0..q.n {
                let rec = by_slot.remove(&(q.key.clone(), i)).ok_or_else(|| {
                    BenchError::Replay(format!("{}: missing completion {}#{i}", path.display(), q.key))
                })?;
                out.push(rec);
            }
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        self.model_name.clone()
    }
}

/// Answers game prompts by resampling the human baseline. Query keys must
/// be scenario ids.
pub struct EmpiricalAgentSource {
    baselines: BTreeMap<ScenarioId, BehaviorSample>,
    specs: BTreeMap<ScenarioId, GameScenarioSpec>,
    seed: u64,
}

impl EmpiricalAgentSource {
    pub fn new(
        baselines: BTreeMap<ScenarioId, BehaviorSample>,
        specs: BTreeMap<ScenarioId, GameScenarioSpec>,
        seed: u64,
    ) -> Self {
        EmpiricalAgentSource { baselines, specs, seed }
    }
}

impl CompletionSource for EmpiricalAgentSource {
    fn collect(&self, task: TaskId, queries: &[Query], _sampling: Sampling) -> Result<Vec<RawCompletion>, BenchError> {
        if task != TaskId::GameDistributions {
            return Err(BenchError::Config(format!("the empirical agent only plays games, not {task}")));
        }
        let mut out = Vec::new();
        for q in queries {
            let id: ScenarioId = q
                .key
                .parse()
                .map_err(|e| BenchError::Task { task, message: format!("{e}") })?;
            let (Some(baseline), Some(spec)) = (self.baselines.get(&id), self.specs.get(&id)) else {
                return Err(BenchError::Task {
                    task,
                    message: format!("no human baseline for {id}"),
                });
            };
            let draw = empirical_agent_sample(baseline, q.n, derive_seed(self.seed, id.as_str())).map_err(|e| {
                BenchError::Task {
                    task,
                    message: e.to_string(),
                }
            })?;
            out.extend(draw.values().iter().enumerate().map(|(i, v)| RawCompletion {
                task: task.to_string(),
                key: q.key.clone(),
                index: i,
                session_id: session_id(task, &q.key, i),
                text: Some(format_action(spec, v.value())),
                error: None,
                attempt_count: 1,
                latency_ms: 0,
            }));
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        "empirical agent (human baseline resampling)".into()
    }
}

/// Ensure `dir` exists and accepts writes.
pub fn ensure_writable(dir: &Path) -> Result<(), BenchError> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let probe = dir.join(".write-probe");
    std::fs::write(&probe, b"").map_err(|e| BenchError::io(dir, e))?;
    std::fs::remove_file(&probe).map_err(|e| BenchError::io(dir, e))
}
