//! End-to-end orchestration of a benchmark run.
//!
//! All inputs are loaded and validated, and the output directory is checked
//! for writability, before the first request goes out. Tasks then run one
//! after another; within a task the client's bounded parallelism applies.

use std::path::{Path, PathBuf};

use super::config::BenchConfig;
use super::raw::write_raw_log;
use super::report::{render_report, BenchmarkReport, ReportHeader, TaskRunInfo};
use super::scorer::{BleurtBridge, ExternalScorer};
use super::source::{ensure_writable, CompletionSource, EmpiricalAgentSource, LiveSource, Query, ReplaySource};
use super::tasks::games::GameTaskData;
use super::tasks::survey::SurveyEval;
use super::tasks::{context, games, ieo, survey, workflow, TaskOutcome, TaskStatus};
use super::{exit_code, BenchError, RunOptions, TaskId};
use crate::client::ModelClient;
use crate::datasets::{load_bigfive_csv, load_game_log, load_ieo_json, load_workflow_jsonl, split_holdout, ContestQuestion, WorkflowRecord};
use crate::exec::derive_seed;
use crate::games::ScenarioId;
use crate::metrics::DEFAULT_KS_BIN_WIDTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskSelection {
    All,
    One(TaskId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunMode {
    /// Query the endpoint; with `log_raw`, also log wire bodies.
    Live { log_raw: bool },
    /// Recompute from the raw logs of a previous run.
    Replay(PathBuf),
}

#[derive(Debug)]
pub struct RunSummary {
    pub report: BenchmarkReport,
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
}

enum Prepared {
    Games(GameTaskData),
    Traits(SurveyEval),
    Age(SurveyEval),
    Context {
        directions: Vec<String>,
        keywords: Vec<String>,
        repetitions: usize,
    },
    Workflow {
        records: Vec<WorkflowRecord>,
        scorer: Option<BleurtBridge>,
    },
    Ieo {
        questions: Vec<ContestQuestion>,
        runs: usize,
    },
}

impl Prepared {
    fn queries(&self) -> Result<Vec<Query>, BenchError> {
        Ok(match self {
            Prepared::Games(d) => games::plan(d)?,
            Prepared::Traits(e) => survey::plan_traits(e),
            Prepared::Age(e) => survey::plan_age(e),
            Prepared::Context {
                directions,
                repetitions,
                ..
            } => context::plan(directions, *repetitions),
            Prepared::Workflow { records, .. } => workflow::plan(records),
            Prepared::Ieo { questions, runs } => ieo::plan(questions, *runs),
        })
    }

    fn sessions_per_query(&self) -> usize {
        match self {
            Prepared::Games(d) => d.sample_count,
            Prepared::Context { repetitions, .. } => *repetitions,
            Prepared::Ieo { runs, .. } => *runs,
            _ => 1,
        }
    }
}

fn load_survey_eval(
    cfg: &BenchConfig,
    section: &super::config::SurveyTaskConfig,
) -> Result<(SurveyEval, String), BenchError> {
    let load = load_bigfive_csv(&section.data)?;
    let kept = load.records.len();
    let mut eval = if section.holdout_fraction < 1.0 {
        split_holdout(&load.records, section.holdout_fraction, derive_seed(cfg.seed, "survey_holdout"))?.1
    } else {
        load.records.clone()
    };
    if let Some(max) = section.max_subjects {
        eval.truncate(max);
    }
    if eval.is_empty() {
        return Err(BenchError::Config(format!("{}: no evaluation subjects", section.data.display())));
    }
    let reasons: Vec<String> = load
        .dropped
        .iter()
        .map(|(r, n)| format!("{} {n}", r.as_str()))
        .collect();
    let note = format!(
        "Survey data: {} rows read, {} dropped ({}), {} kept; {} evaluation subjects (holdout fraction {}).",
        load.rows_read,
        load.dropped_total(),
        if reasons.is_empty() { "none".into() } else { reasons.join(", ") },
        kept,
        eval.len(),
        section.holdout_fraction
    );
    Ok((SurveyEval::new(eval)?, note))
}

fn prepare(
    cfg: &BenchConfig,
    task: TaskId,
    options: &RunOptions,
) -> Result<Option<(Prepared, Vec<String>)>, BenchError> {
    let t = &cfg.tasks;
    let prepared = match task {
        TaskId::GameDistributions => {
            let Some(g) = &t.game_distributions else { return Ok(None) };
            let specs = cfg.game_specs()?;
            let log = load_game_log(&g.baselines, &specs)?;
            let baselines = log.baselines();
            let scenarios = g.scenarios.clone().unwrap_or_else(|| ScenarioId::ALL.to_vec());
            if let Some(missing) = scenarios.iter().find(|id| !baselines.contains_key(id)) {
                return Err(BenchError::Config(format!(
                    "{}: no human baseline rows for scenario {missing}",
                    g.baselines.display()
                )));
            }
            let notes = vec![format!(
                "Human game log: {} rows accepted, {} rejected.",
                log.records.len(),
                log.rejected.len()
            )];
            let data = GameTaskData {
                specs,
                baselines,
                scenarios,
                sample_count: options.n.unwrap_or(g.sample_count),
                bin_width: g.bin_width,
            };
            (Prepared::Games(data), notes)
        }
        TaskId::BigfivePrediction | TaskId::AgeInference => {
            let section = if task == TaskId::BigfivePrediction {
                &t.bigfive_prediction
            } else {
                &t.age_inference
            };
            let Some(s) = section else { return Ok(None) };
            let (eval, note) = load_survey_eval(cfg, s)?;
            let p = if task == TaskId::BigfivePrediction {
                Prepared::Traits(eval)
            } else {
                Prepared::Age(eval)
            };
            (p, vec![note])
        }
        TaskId::ContextInference => {
            let c = t.context_inference.clone().unwrap_or_default();
            (
                Prepared::Context {
                    directions: c.directions,
                    keywords: c.reference_keywords,
                    repetitions: options.n.unwrap_or(c.repetitions),
                },
                Vec::new(),
            )
        }
        TaskId::WorkflowReasoning => {
            let Some(w) = &t.workflow_reasoning else { return Ok(None) };
            let mut records = load_workflow_jsonl(&w.data)?;
            if !w.split.is_empty() {
                records.retain(|r| r.split.as_deref() == Some(w.split.as_str()));
            }
            if let Some(max) = w.max_records {
                records.truncate(max);
            }
            if records.is_empty() {
                return Err(BenchError::Config(format!(
                    "{}: no records with split `{}`",
                    w.data.display(),
                    w.split
                )));
            }
            let scorer = w.bleurt.as_ref().map(|b| BleurtBridge::new(b.command.clone(), b.checkpoint.clone()));
            (Prepared::Workflow { records, scorer }, Vec::new())
        }
        TaskId::IeoContest => {
            let Some(i) = &t.ieo_contest else { return Ok(None) };
            let questions = load_ieo_json(&i.questions)?;
            if questions.is_empty() {
                return Err(BenchError::Config(format!("{}: no questions", i.questions.display())));
            }
            (
                Prepared::Ieo {
                    questions,
                    runs: options.n.unwrap_or(i.runs),
                },
                Vec::new(),
            )
        }
    };
    Ok(Some(prepared))
}

fn score(prepared: &Prepared, records: &[super::RawCompletion], model: &str) -> Result<TaskOutcome, BenchError> {
    match prepared {
        Prepared::Games(d) => games::score(d, records, model),
        Prepared::Traits(e) => survey::score_traits(e, records, model),
        Prepared::Age(e) => survey::score_age(e, records, model),
        Prepared::Context { directions, keywords, .. } => context::score(directions, keywords, records, model),
        Prepared::Workflow { records: recs, scorer } => {
            workflow::score(recs, records, scorer.as_ref().map(|s| s as &dyn ExternalScorer), model)
        }
        Prepared::Ieo { questions, .. } => ieo::score(questions, records, model),
    }
}

/// Run the selected tasks and write the report under `out_dir`.
pub fn run_benchmark(
    cfg: &BenchConfig,
    selection: TaskSelection,
    options: &RunOptions,
    mode: &RunMode,
    out_dir: &Path,
) -> Result<RunSummary, BenchError> {
    cfg.validate()?;
    let tasks: Vec<TaskId> = match selection {
        TaskSelection::All => TaskId::ALL.to_vec(),
        TaskSelection::One(t) => vec![t],
    };

    // Everything that can fail without the network fails here.
    let mut plans = Vec::new();
    for &task in &tasks {
        match prepare(cfg, task, options)? {
            Some((prepared, notes)) => {
                let queries = prepared.queries()?;
                plans.push((task, Some((prepared, queries, notes))));
            }
            None if selection == TaskSelection::All => plans.push((task, None)),
            None => return Err(BenchError::Config(format!("no [tasks.{task}] section in config"))),
        }
    }
    ensure_writable(out_dir)?;
    let raw_dir = out_dir.join("raw");
    ensure_writable(&raw_dir)?;

    let uses_endpoint = plans
        .iter()
        .any(|(t, p)| p.is_some() && !(options.empirical_agent && *t == TaskId::GameDistributions));
    let live = match mode {
        RunMode::Live { log_raw } => {
            if uses_endpoint {
                ModelClient::new(cfg.endpoint()).map_err(|e| BenchError::Config(e.to_string()))?;
            }
            let mut src = LiveSource::new(cfg.endpoint(), &raw_dir);
            if *log_raw {
                src = src.with_wire_log(&raw_dir);
            }
            Some(src)
        }
        RunMode::Replay(_) => None,
    };
    let replay = match mode {
        RunMode::Replay(dir) => Some(ReplaySource::new(dir, cfg.endpoint.model_name.clone())),
        RunMode::Live { .. } => None,
    };

    let model = cfg.endpoint.model_name.clone();
    let mut outcomes = Vec::new();
    let mut runs = Vec::new();
    let mut transport_down = false;
    for (task, plan) in plans {
        let Some((prepared, queries, notes)) = plan else {
            outcomes.push(TaskOutcome::failed(task, format!("not configured (no [tasks.{task}] section)")));
            continue;
        };
        let sampling = cfg.sampling(task);
        let task_seed = derive_seed(cfg.seed, task.as_str());
        runs.push(TaskRunInfo {
            task,
            sampling,
            sessions_per_query: prepared.sessions_per_query(),
            seed: task_seed,
        });
        let agent_games = options.empirical_agent && task == TaskId::GameDistributions;
        if transport_down && !agent_games && replay.is_none() {
            outcomes.push(TaskOutcome::failed(task, "skipped after a transport failure in an earlier task"));
            continue;
        }
        log::info!("{task}: {} sessions", queries.iter().map(|q| q.n).sum::<usize>());

        let records = match (&replay, &prepared) {
            (Some(r), _) => r.collect(task, &queries, sampling)?,
            (None, Prepared::Games(d)) if agent_games => {
                EmpiricalAgentSource::new(d.baselines.clone(), d.specs.clone(), task_seed).collect(task, &queries, sampling)?
            }
            (None, _) => live.as_ref().expect("live source").collect(task, &queries, sampling)?,
        };
        let raw_rel = format!("raw/{task}.jsonl");
        if replay.is_some() || agent_games {
            write_raw_log(&out_dir.join(&raw_rel), &records)?;
        }

        let table_model = if agent_games {
            "empirical agent".to_string()
        } else {
            model.clone()
        };
        let mut outcome = score(&prepared, &records, &table_model)?;
        debug_assert!(outcome.counts.is_conserved(), "{task}: {:?}", outcome.counts);
        outcome.raw_log = Some(raw_rel);
        outcome.notes.splice(0..0, notes);
        if matches!(outcome.status, TaskStatus::TransportFailure { .. }) {
            transport_down = true;
        }
        outcomes.push(outcome);
    }

    let mut header_notes = vec![format!(
        "Smoothed KS test: values binned as floor(v / {DEFAULT_KS_BIN_WIDTH}); pass means p > 0.05."
    )];
    if tasks.contains(&TaskId::WorkflowReasoning) {
        header_notes.push(match cfg.tasks.workflow_reasoning.as_ref().and_then(|w| w.bleurt.as_ref()) {
            Some(b) => format!("BLEURT checkpoint: {}", b.checkpoint),
            None => "BLEURT: unavailable".to_string(),
        });
    }
    if options.empirical_agent {
        header_notes.push("Game actions were sampled from the human baseline by the empirical agent.".into());
    }
    let games = if tasks.contains(&TaskId::GameDistributions) && cfg.tasks.game_distributions.is_some() {
        cfg.game_specs()?.into_values().collect()
    } else {
        Vec::new()
    };
    let report = BenchmarkReport {
        header: ReportHeader {
            model,
            base_url: cfg.endpoint.base_url.clone(),
            config_hash: cfg.fingerprint(options),
            seed: cfg.seed,
            runs,
            games,
            notes: header_notes,
        },
        outcomes,
    };
    let files = render_report(&report, out_dir)?;
    let code = report
        .outcomes
        .iter()
        .map(|o| match o.status {
            TaskStatus::TransportFailure { .. } => exit_code::TRANSPORT,
            TaskStatus::Degraded { .. } => exit_code::DEGRADED,
            _ => exit_code::SUCCESS,
        })
        .max()
        .unwrap_or(exit_code::SUCCESS);
    Ok(RunSummary {
        report,
        exit_code: code,
        files,
    })
}
