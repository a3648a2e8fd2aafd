use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use befm_core::bench::runner::{RunMode, TaskSelection};
use befm_core::bench::{exit_code, run_benchmark, BenchConfig, BenchError, RunOptions, TaskId};
use befm_core::datasets::{
    emit_alpaca, load_bigfive_csv, load_game_log, load_workflow_jsonl, score_bigfive, write_alpaca_json, AlpacaSource,
    AlpacaTask, DatasetError, Dimension,
};
use befm_core::games::GameScenarioSpec;

#[derive(Parser)]
#[command(name = "befm-bench", version, about = "Behavioral-science benchmark harness for chat-completion models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run benchmark tasks and write a report.
    Run {
        /// Task id or `all`.
        #[arg(long, default_value = "all")]
        task: String,
        #[arg(long)]
        config: PathBuf,
        /// Sessions per prompt (game samples, contest runs, context repetitions).
        #[arg(long)]
        n: Option<usize>,
        /// Recompute from the raw logs in DIR instead of querying the model.
        #[arg(long, value_name = "DIR")]
        replay: Option<PathBuf>,
        /// Also log request/response bodies to raw/<task>.wire.jsonl.
        #[arg(long)]
        log_raw: bool,
        /// Sample game actions from the human baseline instead of the model.
        #[arg(long)]
        empirical_agent: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write Alpaca-format training records as a JSON array.
    EmitData {
        /// One of bigfive_traits, demographics, demographics_age,
        /// idea_generation, title_prediction, game_behavior.
        #[arg(long)]
        task: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a Big Five survey file into OCEAN scores (CSV).
    ScoreBigfive {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(
    task: &str,
    config: &Path,
    n: Option<usize>,
    replay: Option<PathBuf>,
    log_raw: bool,
    empirical_agent: bool,
    out: &Path,
) -> Result<i32, BenchError> {
    let cfg = BenchConfig::load(config)?;
    let selection = match task {
        "all" => TaskSelection::All,
        t => TaskSelection::One(t.parse::<TaskId>()?),
    };
    if n == Some(0) {
        return Err(BenchError::Config("--n must be at least 1".into()));
    }
    let options = RunOptions { n, empirical_agent };
    let mode = match replay {
        Some(dir) => RunMode::Replay(dir),
        None => RunMode::Live { log_raw },
    };
    let summary = run_benchmark(&cfg, selection, &options, &mode, out)?;
    for o in &summary.report.outcomes {
        eprintln!("{:<20} {}", o.task.as_str(), o.status.label());
    }
    eprintln!("report written to {}", out.join("report.md").display());
    Ok(summary.exit_code)
}

fn emit_data(task: &str, input: &Path, out: &Path) -> Result<usize, DatasetError> {
    let task: AlpacaTask = task.parse()?;
    let entries = match task {
        AlpacaTask::BigfiveTraits | AlpacaTask::Demographics | AlpacaTask::DemographicsAge => {
            let load = load_bigfive_csv(input)?;
            emit_alpaca(task, AlpacaSource::Survey(&load.records))?
        }
        AlpacaTask::IdeaGeneration | AlpacaTask::TitlePrediction => {
            let records = load_workflow_jsonl(input)?;
            emit_alpaca(task, AlpacaSource::Workflow(&records))?
        }
        AlpacaTask::GameBehavior => {
            let specs = GameScenarioSpec::defaults().into_iter().map(|s| (s.id(), s)).collect();
            let log = load_game_log(input, &specs)?;
            if !log.rejected.is_empty() {
                eprintln!("{} game log rows rejected", log.rejected.len());
            }
            emit_alpaca(
                task,
                AlpacaSource::GameLog {
                    records: &log.records,
                    specs: &specs,
                },
            )?
        }
    };
    write_alpaca_json(&entries, out)?;
    Ok(entries.len())
}

fn score_file(input: &Path, out: &Path) -> anyhow::Result<()> {
    let load = load_bigfive_csv(input)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(out)
        .with_context(|| format!("creating {}", out.display()))?;
    let mut header = vec!["subject_id".to_string(), "age".to_string()];
    header.extend(Dimension::ALL.iter().map(|d| d.name().to_string()));
    w.write_record(&header)?;
    for r in &load.records {
        let s = score_bigfive(r)?;
        let mut row = vec![r.subject_id.clone(), r.demographics.age.to_string()];
        row.extend(Dimension::ALL.iter().map(|&d| s.get(d).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    eprintln!(
        "{} rows read, {} dropped, {} scored",
        load.rows_read,
        load.dropped_total(),
        load.records.len()
    );
    for (reason, n) in &load.dropped {
        eprintln!("  dropped {}: {n}", reason.as_str());
    }
    Ok(())
}

fn dataset_exit(e: &DatasetError) -> i32 {
    match e {
        DatasetError::Io { .. } => exit_code::IO,
        _ => exit_code::CONFIG,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            task,
            config,
            n,
            replay,
            log_raw,
            empirical_agent,
            out,
        } => match run(&task, &config, n, replay, log_raw, empirical_agent, &out) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::EmitData { task, input, out } => match emit_data(&task, &input, &out) {
            Ok(n) => {
                eprintln!("{n} records written to {}", out.display());
                exit_code::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                dataset_exit(&e)
            }
        },
        Command::ScoreBigfive { input, out } => match score_file(&input, &out) {
            Ok(()) => exit_code::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                match e.downcast_ref::<DatasetError>() {
                    Some(d) => dataset_exit(d),
                    None => exit_code::IO,
                }
            }
        },
    };
    ExitCode::from(code as u8)
}
