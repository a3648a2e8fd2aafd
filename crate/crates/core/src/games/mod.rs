//! The seven economic-game scenarios: prompt rendering, action validation,
//! response parsing and the empirical-agent baseline.

mod agent;
mod parse;
mod scenario;

use thiserror::Error;

pub use agent::{bootstrap_self_test, empirical_agent_sample, SelfTestOutcome};
pub use parse::{format_action, parse_bracketed_integer, parse_game_response};
pub use scenario::{
    render_template, validate_action, ActionUnit, ActionValue, BehaviorSample, GameScenarioSpec, SampleSource,
    ScenarioId, ScenarioOverrides,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("template references undefined placeholder `{{{placeholder}}}`")]
    Template { placeholder: String },
    #[error("template renders to empty text")]
    EmptyTemplate,
    #[error("invalid action space for {scenario}: min {min} > max {max}")]
    InvalidActionSpace { scenario: ScenarioId, min: i64, max: i64 },
    #[error("no bracketed integer in response")]
    NoBracketedInteger,
    #[error("{scenario} action {value} outside [{min}, {max}]")]
    OutOfRange {
        scenario: ScenarioId,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("unknown scenario id `{0}`")]
    UnknownScenario(String),
    #[error("behavior sample mixes scenarios {expected} and {found}")]
    MixedScenarios { expected: ScenarioId, found: ScenarioId },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("cannot read template {path}: {message}")]
    TemplateIo { path: String, message: String },
}
