//! OpenAI-compatible chat-completion client.
//!
//! [`ModelClient`] issues single calls with retry and backoff, and runs
//! batches of independent sessions with at most `max_parallel` requests in
//! flight. Results always come back in session order.

mod http;
mod wire;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use http::ModelClient;
pub use wire::{completion_text, request_body};

/// Fraction of failed sessions above which a batch is considered degraded.
pub const DEGRADED_FAILURE_RATE: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClientError {
    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("environment variable `{0}` holding the API key is not set")]
    MissingApiKey(String),
    /// Non-retryable HTTP status; carries the server's message.
    #[error("request rejected with HTTP {status}: {message}")]
    Request { status: u16, message: String, attempts: u32 },
    #[error("transport failure after {attempts} attempt(s): {message}")]
    Transport { message: String, attempts: u32 },
    #[error("{failed} of {total} sessions failed")]
    BatchDegraded {
        failed: usize,
        total: usize,
        successes: Vec<ChatResponse>,
    },
}

impl ClientError {
    /// Attempts made before the error was returned (0 when nothing was sent).
    pub fn attempts(&self) -> u32 {
        match self {
            ClientError::Request { attempts, .. } | ClientError::Transport { attempts, .. } => *attempts,
            _ => 0,
        }
    }
}

/// Connection and sampling settings for the model under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEndpoint {
    pub base_url: String,
    pub model_name: String,
    /// Name of the environment variable holding the bearer token. `None`
    /// sends no Authorization header.
    pub api_key_env: Option<String>,
    pub timeout: Duration,
    pub max_retries: u32,
    pub temperature: f64,
    pub top_p: Option<f64>,
    pub max_tokens: Option<u32>,
    pub max_parallel: usize,
    pub backoff_base: Duration,
}

impl ModelEndpoint {
    pub fn new(base_url: impl Into<String>, model_name: impl Into<String>) -> Self {
        ModelEndpoint {
            base_url: base_url.into(),
            model_name: model_name.into(),
            api_key_env: None,
            timeout: Duration::from_secs(60),
            max_retries: 3,
            temperature: 0.0,
            top_p: None,
            max_tokens: None,
            max_parallel: 8,
            backoff_base: Duration::from_millis(500),
        }
    }

    pub fn validate(&self) -> Result<(), ClientError> {
        let bad = |m: String| Err(ClientError::InvalidEndpoint(m));
        if !(self.base_url.starts_with("http://") || self.base_url.starts_with("https://")) {
            return bad(format!("base_url `{}` must be an http(s) URL", self.base_url));
        }
        if self.model_name.trim().is_empty() {
            return bad("model_name is empty".into());
        }
        if self.max_parallel == 0 {
            return bad("max_parallel must be at least 1".into());
        }
        if self.timeout.is_zero() {
            return bad("timeout must be positive".into());
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return bad(format!("temperature must be finite and >= 0, got {}", self.temperature));
        }
        if let Some(p) = self.top_p {
            if !(p > 0.0 && p <= 1.0) {
                return bad(format!("top_p must lie in (0, 1], got {p}"));
            }
        }
        Ok(())
    }

    /// Copy with a different temperature (tasks pick their own defaults).
    pub fn with_temperature(&self, temperature: f64) -> Self {
        ModelEndpoint {
            temperature,
            ..self.clone()
        }
    }

    pub fn chat_url(&self) -> String {
        format!("{}/chat/completions", self.base_url.trim_end_matches('/'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub system_prompt: Option<String>,
    pub user_prompt: String,
    pub session_id: String,
}

impl ChatRequest {
    pub fn new(system_prompt: Option<String>, user_prompt: impl Into<String>, session_id: impl Into<String>) -> Self {
        ChatRequest {
            system_prompt: system_prompt.filter(|s| !s.is_empty()),
            user_prompt: user_prompt.into(),
            session_id: session_id.into(),
        }
    }

    pub fn validate(&self) -> Result<(), ClientError> {
        if self.user_prompt.trim().is_empty() {
            return Err(ClientError::InvalidRequest(format!(
                "session {}: user prompt is empty",
                self.session_id
            )));
        }
        Ok(())
    }

    /// The same prompts under another session id.
    pub fn with_session(&self, session_id: impl Into<String>) -> Self {
        ChatRequest {
            session_id: session_id.into(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub session_id: String,
    pub text: String,
    pub latency_ms: u64,
    pub attempt_count: u32,
}

/// Per-session result of a batch; failures do not abort the batch.
pub type SessionOutcome = Result<ChatResponse, SessionFailure>;

#[derive(Debug, Clone, PartialEq)]
pub struct SessionFailure {
    pub session_id: String,
    pub error: ClientError,
}

/// Whether `failed` out of `total` sessions crosses the degradation line.
pub fn is_degraded(failed: usize, total: usize) -> bool {
    total > 0 && failed as f64 > DEGRADED_FAILURE_RATE * total as f64
}
