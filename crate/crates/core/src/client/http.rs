use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::{json, Value};
use ureq::Agent;

use super::wire::{completion_text, error_message, request_body};
use super::{is_degraded, ChatRequest, ChatResponse, ClientError, ModelEndpoint, SessionFailure, SessionOutcome};
use crate::exec::Exec;

/// Blocking chat-completion client. Shareable across threads.
pub struct ModelClient {
    endpoint: ModelEndpoint,
    agent: Agent,
    api_key: Option<String>,
    exec: Exec,
    wire_log: Option<Mutex<BufWriter<File>>>,
}

enum Attempt {
    Done(String),
    Retry(String),
    Fatal { status: u16, message: String },
}

fn retryable_status(status: u16) -> bool {
    status >= 500 || status == 408 || status == 429
}

impl ModelClient {
    /// Validate the endpoint and resolve the API key from the environment.
    pub fn new(endpoint: ModelEndpoint) -> Result<Self, ClientError> {
        endpoint.validate()?;
        let api_key = match &endpoint.api_key_env {
            Some(var) => match std::env::var(var) {
                Ok(v) if !v.is_empty() => Some(v),
                _ => return Err(ClientError::MissingApiKey(var.clone())),
            },
            None => None,
        };
        let config = Agent::config_builder()
            .timeout_global(Some(endpoint.timeout))
            .http_status_as_error(false)
            .build();
        Ok(ModelClient {
            agent: Agent::new_with_config(config),
            endpoint,
            api_key,
            exec: Exec::default(),
            wire_log: None,
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    /// Append every request/response body to `path` as JSON lines.
    pub fn with_wire_log(mut self, path: &Path) -> std::io::Result<Self> {
        self.wire_log = Some(Mutex::new(BufWriter::new(File::create(path)?)));
        Ok(self)
    }

    pub fn endpoint(&self) -> &ModelEndpoint {
        &self.endpoint
    }

    fn log_wire(&self, entry: Value) {
        if let Some(log) = &self.wire_log {
            let mut w = log.lock().unwrap_or_else(|p| p.into_inner());
            if let Err(e) = writeln!(w, "{entry}").and_then(|_| w.flush()) {
                log::warn!("wire log write failed: {e}");
            }
        }
    }

    fn attempt_once(&self, body: &str) -> Attempt {
        let mut req = self
            .agent
            .post(&self.endpoint.chat_url())
            .header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = match req.send(body) {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status().as_u16();
        let raw = match resp.body_mut().read_to_string() {
            Ok(s) => s,
            Err(e) => return Attempt::Retry(format!("reading body: {e}")),
        };
        if (200..300).contains(&status) {
            return match serde_json::from_str::<Value>(&raw).ok().as_ref().and_then(completion_text) {
                Some(text) => Attempt::Done(text),
                None => Attempt::Fatal {
                    status,
                    message: "response has no choices[0].message.content".into(),
                },
            };
        }
        let message = error_message(&raw);
        if retryable_status(status) {
            Attempt::Retry(format!("HTTP {status}: {message}"))
        } else {
            Attempt::Fatal { status, message }
        }
    }

    fn backoff(&self, failures: u32) {
        let base = self.endpoint.backoff_base.as_millis() as u64;
        let cap = base.saturating_mul(1u64 << (failures - 1).min(20));
        if cap > 0 {
            let wait = rand::rng().random_range(0..=cap);
            thread::sleep(Duration::from_millis(wait));
        }
    }

    /// One completion. Transport errors, 5xx, 408 and 429 are retried up to
    /// `max_retries` times; other statuses fail immediately.
    pub fn chat_complete(&self, request: &ChatRequest) -> Result<ChatResponse, ClientError> {
        request.validate()?;
        let body = request_body(&self.endpoint, request);
        let body_text = body.to_string();
        let started = Instant::now();
        let max_attempts = self.endpoint.max_retries + 1;
        let mut last_error = String::new();
        for attempt in 1..=max_attempts {
            if attempt > 1 {
                self.backoff(attempt - 1);
            }
            let outcome = self.attempt_once(&body_text);
            self.log_wire(json!({
                "session_id": request.session_id,
                "attempt": attempt,
                "request": body,
                "outcome": match &outcome {
                    Attempt::Done(t) => json!({"text": t}),
                    Attempt::Retry(m) => json!({"retryable_error": m}),
                    Attempt::Fatal { status, message } => json!({"status": status, "error": message}),
                },
            }));
            match outcome {
                Attempt::Done(text) => {
                    return Ok(ChatResponse {
                        session_id: request.session_id.clone(),
                        text,
                        latency_ms: started.elapsed().as_millis() as u64,
                        attempt_count: attempt,
                    })
                }
                Attempt::Fatal { status, message } => {
                    return Err(ClientError::Request {
                        status,
                        message,
                        attempts: attempt,
                    })
                }
                Attempt::Retry(m) => {
                    log::debug!("session {} attempt {attempt} failed: {m}", request.session_id);
                    last_error = m;
                }
            }
        }
        Err(ClientError::Transport {
            message: last_error,
            attempts: max_attempts,
        })
    }

    /// Run independent sessions with at most `max_parallel` in flight.
    /// Outcomes are in input order; failures are recorded, not raised.
    pub fn run_batch(&self, requests: &[ChatRequest]) -> Vec<SessionOutcome> {
        self.exec.map_bounded(requests, self.endpoint.max_parallel, |r| {
            self.chat_complete(r).map_err(|error| SessionFailure {
                session_id: r.session_id.clone(),
                error,
            })
        })
    }

    /// `n` fresh sessions of the same prompts, ids `<template id>-<i>`.
    /// More than 20% failures yields [`ClientError::BatchDegraded`] carrying
    /// the successful subset.
    pub fn sample_sessions(&self, template: &ChatRequest, n: usize) -> Result<Vec<ChatResponse>, ClientError> {
        if n == 0 {
            return Err(ClientError::InvalidRequest("n must be at least 1".into()));
        }
        template.validate()?;
        let requests: Vec<ChatRequest> = (0..n)
            .map(|i| template.with_session(format!("{}-{i}", template.session_id)))
            .collect();
        let outcomes = self.run_batch(&requests);
        let failed = outcomes.iter().filter(|o| o.is_err()).count();
        let successes: Vec<ChatResponse> = outcomes.into_iter().filter_map(Result::ok).collect();
        if is_degraded(failed, n) {
            return Err(ClientError::BatchDegraded {
                failed,
                total: n,
                successes,
            });
        }
        Ok(successes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_classes() {
        for s in [500, 502, 503, 408, 429] {
            assert!(retryable_status(s), "{s}");
        }
        for s in [400, 401, 403, 404, 422] {
            assert!(!retryable_status(s), "{s}");
        }
    }

    #[test]
    fn missing_key_is_reported() {
        let mut ep = ModelEndpoint::new("http://127.0.0.1:9", "m");
        ep.api_key_env = Some("BEFM_TEST_SURELY_UNSET_KEY".into());
        assert_eq!(
            ModelClient::new(ep).err(),
            Some(ClientError::MissingApiKey("BEFM_TEST_SURELY_UNSET_KEY".into()))
        );
    }

    #[test]
    fn unreachable_host_exhausts_retries() {
        let mut ep = ModelEndpoint::new("http://127.0.0.1:9", "m");
        ep.max_retries = 2;
        ep.backoff_base = Duration::from_millis(1);
        ep.timeout = Duration::from_secs(2);
        let client = ModelClient::new(ep).unwrap();
        let err = client.chat_complete(&ChatRequest::new(None, "hi", "s")).unwrap_err();
        assert!(matches!(err, ClientError::Transport { attempts: 3, .. }), "{err:?}");
    }
}
