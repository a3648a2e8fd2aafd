//! Evaluation harness for behavioral-science benchmarks on chat-completion
//! language models.
//!
//! The crate is organised around the benchmark pipeline:
//!
//! * [`games`] defines the seven economic-game scenarios, renders their
//!   prompts and parses bracketed actions out of model replies.
//! * [`metrics`] holds the statistical comparison machinery (Wasserstein,
//!   MAE, Spearman, binned KS, ROUGE-1, accuracy, histograms).
//! * [`client`] drives OpenAI-compatible chat-completion endpoints with
//!   retries and bounded parallelism.
//! * [`datasets`] loads survey, game-log, workflow and contest data and emits
//!   Alpaca-shaped training records.
//! * [`bench`] orchestrates the six tasks, persists raw completions and
//!   renders reports.
//!
//! Data-parallel inner loops (batch sessions, bootstrap trials, per-item
//! scoring) run on rayon when the `parallel` feature is enabled (default) and
//! fall back to plain iterators otherwise; see [`exec`].

pub mod bench;
pub mod client;
pub mod datasets;
pub mod exec;
pub mod games;
pub mod metrics;

pub use exec::Exec;
