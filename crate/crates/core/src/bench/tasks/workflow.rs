//! Research workflow reasoning: key idea from context, title from the full
//! workflow. ROUGE-1 is computed here; BLEURT comes from the external bridge
//! when one is configured.

use std::collections::HashMap;

use serde::Serialize;

use super::{fmt_num, session_status, SessionCounts, Table, TaskDetails, TaskOutcome};
use crate::bench::raw::RawCompletion;
use crate::bench::scorer::ExternalScorer;
use crate::bench::source::Query;
use crate::bench::{BenchError, TaskId};
use crate::datasets::prompts;
use crate::datasets::WorkflowRecord;
use crate::metrics::rouge1_f1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subtask {
    Idea,
    Title,
}

impl Subtask {
    pub fn as_str(self) -> &'static str {
        match self {
            Subtask::Idea => "idea",
            Subtask::Title => "title",
        }
    }

    fn reference(self, r: &WorkflowRecord) -> &str {
        match self {
            Subtask::Idea => &r.key_idea,
            Subtask::Title => &r.title,
        }
    }
}

/// State of the learned-metric column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BleurtStatus {
    Unavailable,
    Failed(String),
    /// Mean scores for idea and title.
    Scored { idea: Option<f64>, title: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemScore {
    pub subtask: Subtask,
    pub paper_id: String,
    pub rouge1: f64,
    pub bleurt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkflowResults {
    pub items: Vec<ItemScore>,
    pub rouge1_idea: Option<f64>,
    pub rouge1_title: Option<f64>,
    pub bleurt: BleurtStatus,
}

fn key(subtask: Subtask, pos: usize, paper_id: &str) -> String {
    format!("{}/{pos}/{paper_id}", subtask.as_str())
}

pub fn plan(records: &[WorkflowRecord]) -> Vec<Query> {
    let system = prompts::workflow_instruction();
    let ideas = records.iter().enumerate().map(|(pos, r)| {
        Query::new(
            key(Subtask::Idea, pos, &r.paper_id),
            Some(system.clone()),
            prompts::idea_generation_input(r),
            1,
        )
    });
    let titles = records.iter().enumerate().map(|(pos, r)| {
        Query::new(
            key(Subtask::Title, pos, &r.paper_id),
            Some(system.clone()),
            prompts::title_prediction_input(r),
            1,
        )
    });
    ideas.chain(titles).collect()
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn score(
    records: &[WorkflowRecord],
    raw: &[RawCompletion],
    scorer: Option<&dyn ExternalScorer>,
    model: &str,
) -> Result<TaskOutcome, BenchError> {
    let task = TaskId::WorkflowReasoning;
    let index: HashMap<&str, &RawCompletion> = raw.iter().map(|r| (r.key.as_str(), r)).collect();
    let mut counts = SessionCounts::default();
    let mut items = Vec::new();
    let mut pairs = Vec::new();
    for subtask in [Subtask::Idea, Subtask::Title] {
        for (pos, r) in records.iter().enumerate() {
            let Some(rec) = index.get(key(subtask, pos, &r.paper_id).as_str()) else {
                continue;
            };
            counts.issued += 1;
            let Some(text) = &rec.text else {
                counts.failed += 1;
                continue;
            };
            counts.parsed += 1;
            let reference = subtask.reference(r);
            let rouge1 = rouge1_f1(text, reference).map_err(|e| BenchError::Task {
                task,
                message: format!("{}: {e}", r.paper_id),
            })?;
            items.push(ItemScore {
                subtask,
                paper_id: r.paper_id.clone(),
                rouge1,
                bleurt: None,
            });
            pairs.push((text.clone(), reference.to_string()));
        }
    }

    let bleurt = match scorer {
        None => BleurtStatus::Unavailable,
        Some(_) if pairs.is_empty() => BleurtStatus::Scored { idea: None, title: None },
        Some(s) => match s.score_pairs(&pairs) {
            Ok(scores) => {
                for (item, score) in items.iter_mut().zip(scores) {
                    item.bleurt = Some(score);
                }
                let of = |t: Subtask| mean(items.iter().filter(|i| i.subtask == t).filter_map(|i| i.bleurt));
                BleurtStatus::Scored {
                    idea: of(Subtask::Idea),
                    title: of(Subtask::Title),
                }
            }
            Err(e) => {
                log::warn!("BLEURT scoring failed: {e}");
                BleurtStatus::Failed(e.to_string())
            }
        },
    };
    let rouge_of = |t: Subtask| mean(items.iter().filter(|i| i.subtask == t).map(|i| i.rouge1));
    let results = WorkflowResults {
        rouge1_idea: rouge_of(Subtask::Idea),
        rouge1_title: rouge_of(Subtask::Title),
        bleurt,
        items,
    };

    let cell = |v: Option<f64>| v.map(fmt_num).unwrap_or_else(|| "n/a".into());
    let (b_idea, b_title) = match &results.bleurt {
        BleurtStatus::Unavailable => ("unavailable".to_string(), "unavailable".to_string()),
        BleurtStatus::Failed(_) => ("failed".to_string(), "failed".to_string()),
        BleurtStatus::Scored { idea, title } => (cell(*idea), cell(*title)),
    };
    let mut table = Table::new(
        "workflow_reasoning",
        "Research workflow reasoning",
        &["Model", "BLEURT Idea", "BLEURT Title", "ROUGE-1 Idea", "ROUGE-1 Title"],
    );
    table.push(vec![
        model.to_string(),
        b_idea,
        b_title,
        cell(results.rouge1_idea),
        cell(results.rouge1_title),
    ]);
    let mut items_table = Table::new(
        "workflow_items",
        "Per-item scores",
        &["subtask", "paper_id", "rouge1", "bleurt"],
    )
    .csv_only();
    for i in &results.items {
        items_table.push(vec![
            i.subtask.as_str().to_string(),
            i.paper_id.clone(),
            fmt_num(i.rouge1),
            i.bleurt.map(fmt_num).unwrap_or_default(),
        ]);
    }

    let mut notes = vec![format!(
        "{} evaluation records; {} idea rows and {} title rows scored.",
        records.len(),
        results.items.iter().filter(|i| i.subtask == Subtask::Idea).count(),
        results.items.iter().filter(|i| i.subtask == Subtask::Title).count()
    )];
    notes.push(match (&results.bleurt, scorer) {
        (BleurtStatus::Unavailable, _) => "BLEURT: unavailable (no scorer bridge configured).".to_string(),
        (BleurtStatus::Failed(e), _) => format!("BLEURT: failed ({e}); ROUGE-1 is unaffected."),
        (BleurtStatus::Scored { .. }, Some(s)) => format!(
            "{}; scores are only comparable within one checkpoint.",
            s.describe()
        ),
        (BleurtStatus::Scored { .. }, None) => unreachable!("scores require a scorer"),
    });
    Ok(TaskOutcome {
        task,
        status: session_status(raw),
        counts,
        tables: vec![table, items_table],
        histograms: Vec::new(),
        artifacts: Vec::new(),
        notes,
        details: TaskDetails::Workflow(results),
        raw_log: None,
    })
}
