//! `bench.toml` parsing and resolution.
//!
//! Relative data paths are resolved against the directory holding the config
//! file. Resolution happens before any network activity so that a bad path
//! or a missing API key fails with exit code 2 and nothing is sent.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{BenchError, TaskId};
use crate::client::ModelEndpoint;
use crate::games::{GameScenarioSpec, ScenarioId, ScenarioOverrides};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub seed: u64,
    pub endpoint: EndpointConfig,
    #[serde(default)]
    pub games: BTreeMap<ScenarioId, ScenarioOverrides>,
    #[serde(default)]
    pub tasks: TasksConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model_name: String,
    pub api_key_env: Option<String>,
    #[serde(default = "defaults::timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "defaults::max_retries")]
    pub max_retries: u32,
    #[serde(default = "defaults::max_parallel")]
    pub max_parallel: usize,
    #[serde(default = "defaults::backoff_base_ms")]
    pub backoff_base_ms: u64,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
}

/// Sampling overrides shared by every task section.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct SamplingOverrides {
    temperature: Option<f64>,
    top_p: Option<f64>,
    max_tokens: Option<u32>,
}

macro_rules! overrides {
    ($c:expr) => {
        SamplingOverrides {
            temperature: $c.temperature,
            top_p: $c.top_p,
            max_tokens: $c.max_tokens,
        }
    };
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TasksConfig {
    pub game_distributions: Option<GameTaskConfig>,
    pub bigfive_prediction: Option<SurveyTaskConfig>,
    pub age_inference: Option<SurveyTaskConfig>,
    pub context_inference: Option<ContextTaskConfig>,
    pub workflow_reasoning: Option<WorkflowTaskConfig>,
    pub ieo_contest: Option<IeoTaskConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameTaskConfig {
    /// Human game log (CSV: scenario,subject_id,action,session_id,timestamp).
    pub baselines: PathBuf,
    #[serde(default = "defaults::game_samples")]
    pub sample_count: usize,
    /// Scenarios to run; all seven when absent.
    pub scenarios: Option<Vec<ScenarioId>>,
    /// Histogram bin width; the bomb game always uses width 1.
    #[serde(default = "defaults::bin_width")]
    pub bin_width: u32,
    pub temperature: Option<f64>,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyTaskConfig {
    /// Big Five survey file (tab- or comma-separated).
    pub data: PathBuf,
    #[serde(default = "defaults::holdout_fraction")]
    pub holdout_fraction: f64,
    /// Keep only the first N evaluation subjects.
    pub max_subjects: Option<usize>,
    pub temperature: Option<f64>,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextTaskConfig {
    #[serde(default = "defaults::repetitions")]
    pub repetitions: usize,
    #[serde(default = "defaults::directions")]
    pub directions: Vec<String>,
    /// Treatment keywords for the heuristic coverage score.
    #[serde(default)]
    pub reference_keywords: Vec<String>,
    pub temperature: Option<f64>,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
}

impl Default for ContextTaskConfig {
    fn default() -> Self {
        ContextTaskConfig {
            repetitions: defaults::repetitions(),
            directions: defaults::directions(),
            reference_keywords: Vec::new(),
            temperature: None,
            top_p: None,
            max_tokens: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkflowTaskConfig {
    /// Workflow records (JSON lines).
    pub data: PathBuf,
    /// Keep records whose `split` equals this value; all records when empty.
    #[serde(default = "defaults::workflow_split")]
    pub split: String,
    pub max_records: Option<usize>,
    pub bleurt: Option<BleurtConfig>,
    pub temperature: Option<f64>,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BleurtConfig {
    /// Program and leading arguments; `--checkpoint PATH` is appended.
    #[serde(default = "defaults::bleurt_command")]
    pub command: Vec<String>,
    pub checkpoint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IeoTaskConfig {
    /// Contest questions (JSON array).
    pub questions: PathBuf,
    #[serde(default = "defaults::ieo_runs")]
    pub runs: usize,
    pub temperature: Option<f64>,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
}

mod defaults {
    pub fn timeout_secs() -> u64 {
        60
    }
    pub fn max_retries() -> u32 {
        3
    }
    pub fn max_parallel() -> usize {
        8
    }
    pub fn backoff_base_ms() -> u64 {
        500
    }
    pub fn game_samples() -> usize {
        1000
    }
    pub fn bin_width() -> u32 {
        10
    }
    pub fn holdout_fraction() -> f64 {
        0.1
    }
    pub fn repetitions() -> usize {
        5
    }
    pub fn directions() -> Vec<String> {
        vec!["increase".into(), "decrease".into()]
    }
    pub fn workflow_split() -> String {
        "eval".into()
    }
    pub fn bleurt_command() -> Vec<String> {
        vec!["bleurt-bridge".into()]
    }
    pub fn ieo_runs() -> usize {
        10
    }
}

/// Default temperature per task: sampling tasks need diversity, the rest
/// are answered greedily.
pub fn default_temperature(task: TaskId) -> f64 {
    match task {
        TaskId::GameDistributions | TaskId::ContextInference => 1.0,
        _ => 0.0,
    }
}

/// Command-line choices that change what a run computes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Overrides the per-query session count (game samples, contest runs,
    /// context repetitions).
    pub n: Option<usize>,
    /// Sample game actions from the human baseline instead of the model.
    pub empirical_agent: bool,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    /// Load and resolve relative paths against the config's directory.
    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for o in self.games.values_mut() {
            if let Some(p) = o.prompt_template_path.as_mut() {
                fix(p);
            }
        }
        let t = &mut self.tasks;
        if let Some(c) = t.game_distributions.as_mut() {
            fix(&mut c.baselines);
        }
        if let Some(c) = t.bigfive_prediction.as_mut() {
            fix(&mut c.data);
        }
        if let Some(c) = t.age_inference.as_mut() {
            fix(&mut c.data);
        }
        if let Some(c) = t.workflow_reasoning.as_mut() {
            fix(&mut c.data);
        }
        if let Some(c) = t.ieo_contest.as_mut() {
            fix(&mut c.questions);
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        self.endpoint().validate().map_err(|e| BenchError::Config(e.to_string()))?;
        let bad = |m: String| Err(BenchError::Config(m));
        for task in TaskId::ALL {
            let s = self.sampling_overrides(task);
            if let Some(t) = s.temperature {
                if !t.is_finite() || t < 0.0 {
                    return bad(format!("{task}: temperature must be finite and >= 0"));
                }
            }
        }
        if let Some(g) = &self.tasks.game_distributions {
            if g.sample_count == 0 || g.bin_width == 0 {
                return bad("game_distributions: sample_count and bin_width must be positive".into());
            }
        }
        for (name, s) in [
            ("bigfive_prediction", &self.tasks.bigfive_prediction),
            ("age_inference", &self.tasks.age_inference),
        ] {
            if let Some(s) = s {
                if !(s.holdout_fraction > 0.0 && s.holdout_fraction <= 1.0) {
                    return bad(format!("{name}: holdout_fraction must lie in (0, 1]"));
                }
            }
        }
        if let Some(c) = &self.tasks.context_inference {
            if c.repetitions == 0 || c.directions.is_empty() {
                return bad("context_inference: repetitions and directions must be non-empty".into());
            }
        }
        if let Some(i) = &self.tasks.ieo_contest {
            if i.runs == 0 {
                return bad("ieo_contest: runs must be positive".into());
            }
        }
        if let Some(b) = self.tasks.workflow_reasoning.as_ref().and_then(|w| w.bleurt.as_ref()) {
            if b.command.is_empty() || b.checkpoint.trim().is_empty() {
                return bad("workflow_reasoning.bleurt: command and checkpoint are required".into());
            }
        }
        self.game_specs()?;
        Ok(())
    }

    /// Endpoint settings; temperature is filled in per task.
    pub fn endpoint(&self) -> ModelEndpoint {
        let e = &self.endpoint;
        ModelEndpoint {
            base_url: e.base_url.clone(),
            model_name: e.model_name.clone(),
            api_key_env: e.api_key_env.clone(),
            timeout: Duration::from_secs(e.timeout_secs),
            max_retries: e.max_retries,
            temperature: 0.0,
            top_p: e.top_p,
            max_tokens: e.max_tokens,
            max_parallel: e.max_parallel,
            backoff_base: Duration::from_millis(e.backoff_base_ms),
        }
    }

    fn sampling_overrides(&self, task: TaskId) -> SamplingOverrides {
        let t = &self.tasks;
        let s = match task {
            TaskId::GameDistributions => t.game_distributions.as_ref().map(|c| overrides!(c)),
            TaskId::BigfivePrediction => t.bigfive_prediction.as_ref().map(|c| overrides!(c)),
            TaskId::AgeInference => t.age_inference.as_ref().map(|c| overrides!(c)),
            TaskId::ContextInference => t.context_inference.as_ref().map(|c| overrides!(c)),
            TaskId::WorkflowReasoning => t.workflow_reasoning.as_ref().map(|c| overrides!(c)),
            TaskId::IeoContest => t.ieo_contest.as_ref().map(|c| overrides!(c)),
        };
        s.unwrap_or_default()
    }

    /// Effective sampling parameters for a task.
    pub fn sampling(&self, task: TaskId) -> super::Sampling {
        let o = self.sampling_overrides(task);
        super::Sampling {
            temperature: o.temperature.unwrap_or_else(|| default_temperature(task)),
            top_p: o.top_p.or(self.endpoint.top_p),
            max_tokens: o.max_tokens.or(self.endpoint.max_tokens),
        }
    }

    /// All seven scenario specs with `[games.*]` overrides applied.
    pub fn game_specs(&self) -> Result<BTreeMap<ScenarioId, GameScenarioSpec>, BenchError> {
        ScenarioId::ALL
            .into_iter()
            .map(|id| {
                let base = GameScenarioSpec::default_for(id);
                let spec = match self.games.get(&id) {
                    Some(o) => base.with_overrides(o).map_err(|e| BenchError::Config(format!("games.{id}: {e}")))?,
                    None => base,
                };
                spec.render_prompt()
                    .map_err(|e| BenchError::Config(format!("games.{id}: {e}")))?;
                Ok((id, spec))
            })
            .collect()
    }

    /// Whether the config has a section for `task`. Context inference needs
    /// no data and always runs.
    pub fn has_task(&self, task: TaskId) -> bool {
        let t = &self.tasks;
        match task {
            TaskId::GameDistributions => t.game_distributions.is_some(),
            TaskId::BigfivePrediction => t.bigfive_prediction.is_some(),
            TaskId::AgeInference => t.age_inference.is_some(),
            TaskId::ContextInference => true,
            TaskId::WorkflowReasoning => t.workflow_reasoning.is_some(),
            TaskId::IeoContest => t.ieo_contest.is_some(),
        }
    }

    /// SHA-256 over the resolved config and run options, as hex.
    pub fn fingerprint(&self, options: &RunOptions) -> String {
        let payload = serde_json::json!({ "config": self, "options": options });
        let digest = Sha256::digest(payload.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
