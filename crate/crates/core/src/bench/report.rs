//! Report rendering: `report.md`, `tables/*.csv`, `histograms/*.csv` and
//! verbatim artifacts. Output depends only on its inputs (no timestamps),
//! so replaying the same raw logs reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::source::Sampling;
use super::tasks::{Table, TaskOutcome};
use super::{BenchError, TaskId};
use crate::games::GameScenarioSpec;
use crate::metrics::HistogramSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskRunInfo {
    pub task: TaskId,
    pub sampling: Sampling,
    /// Sessions issued per prompt.
    pub sessions_per_query: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportHeader {
    pub model: String,
    pub base_url: String,
    pub config_hash: String,
    pub seed: u64,
    pub runs: Vec<TaskRunInfo>,
    pub games: Vec<GameScenarioSpec>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub header: ReportHeader,
    pub outcomes: Vec<TaskOutcome>,
}

impl BenchmarkReport {
    pub fn outcome(&self, task: TaskId) -> Option<&TaskOutcome> {
        self.outcomes.iter().find(|o| o.task == task)
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn markdown_table(out: &mut String, t: &Table) {
    let _ = writeln!(out, "| {} |", t.columns.iter().map(|c| cell(c)).collect::<Vec<_>>().join(" | "));
    let _ = writeln!(out, "|{}", t.columns.iter().map(|_| "---|").collect::<String>());
    for row in &t.rows {
        let _ = writeln!(out, "| {} |", row.iter().map(|c| cell(c)).collect::<Vec<_>>().join(" | "));
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "unset".into())
}

/// The Markdown report text.
pub fn render_markdown(report: &BenchmarkReport) -> String {
    let h = &report.header;
    let mut out = String::new();
    let _ = writeln!(out, "# Benchmark report\n");
    let _ = writeln!(out, "| Field | Value |\n|---|---|");
    let _ = writeln!(out, "| Model | {} |", cell(&h.model));
    let _ = writeln!(out, "| Endpoint | {} |", cell(&h.base_url));
    let _ = writeln!(out, "| Config hash (SHA-256) | {} |", h.config_hash);
    let _ = writeln!(out, "| Master seed | {} |", h.seed);
    let _ = writeln!(out);

    let _ = writeln!(out, "## Sampling parameters\n");
    let _ = writeln!(
        out,
        "| Task | Temperature | top_p | max_tokens | Sessions per prompt | Task seed |\n|---|---|---|---|---|---|"
    );
    for r in &h.runs {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.task,
            r.sampling.temperature,
            opt(r.sampling.top_p),
            opt(r.sampling.max_tokens),
            r.sessions_per_query,
            r.seed
        );
    }
    let _ = writeln!(out);

    if !h.games.is_empty() {
        let _ = writeln!(out, "## Game scenarios\n");
        let _ = writeln!(out, "| Scenario | Action min | Action max | Unit | Endowment |\n|---|---|---|---|---|");
        for g in &h.games {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:?} | {} |",
                g.id().column_name(),
                g.action_min(),
                g.action_max(),
                g.action_unit(),
                g.endowment().map(|e| e.to_string()).unwrap_or_else(|| "none".into())
            );
        }
        let _ = writeln!(out);
    }

    for o in &report.outcomes {
        let _ = writeln!(out, "## {} (`{}`)\n", o.task.title(), o.task);
        let _ = writeln!(out, "Status: {}\n", o.status.label());
        for t in o.tables.iter().filter(|t| !t.csv_only) {
            let _ = writeln!(out, "### {}\n", t.title);
            markdown_table(&mut out, t);
            let _ = writeln!(out);
        }
        let c = &o.counts;
        let _ = writeln!(
            out,
            "Sessions: {} issued, {} parsed, {} excluded ({} out of range, {} unparseable), {} failed.\n",
            c.issued,
            c.parsed,
            c.excluded(),
            c.out_of_range,
            c.unparseable,
            c.failed
        );
        let mut files: Vec<String> = o.tables.iter().map(|t| format!("tables/{}.csv", t.name)).collect();
        files.extend(o.histograms.iter().map(|h| format!("histograms/{}.csv", h.name)));
        if let Some(raw) = &o.raw_log {
            files.push(raw.clone());
        }
        if !o.artifacts.is_empty() {
            files.push(format!("{} verbatim completion file(s) under context/", o.artifacts.len()));
        }
        if !files.is_empty() {
            let _ = writeln!(out, "Files: {}\n", files.join(", "));
        }
        for n in &o.notes {
            let _ = writeln!(out, "- {n}");
        }
        if !o.notes.is_empty() {
            let _ = writeln!(out);
        }
    }

    if !h.notes.is_empty() {
        let _ = writeln!(out, "## Notes\n");
        for n in &h.notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    out
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| BenchError::io(path, e))?;
    w.write_record(header).map_err(|e| BenchError::io(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| BenchError::io(path, e))?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))
}

fn histogram_rows(h: &HistogramSpec) -> Vec<Vec<String>> {
    h.bins()
        .map(|(lo, hi, n)| vec![lo.to_string(), hi.to_string(), n.to_string()])
        .collect()
}

fn create_dir(path: &Path) -> Result<(), BenchError> {
    std::fs::create_dir_all(path).map_err(|e| BenchError::io(path, e))
}

/// Write every report file under `out_dir`; returns the written paths.
pub fn render_report(report: &BenchmarkReport, out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    if report.outcomes.is_empty() {
        return Err(BenchError::Config("no task results to report".into()));
    }
    let mut written = Vec::new();
    create_dir(out_dir)?;
    let tables_dir = out_dir.join("tables");
    let hist_dir = out_dir.join("histograms");
    for o in &report.outcomes {
        for t in &o.tables {
            create_dir(&tables_dir)?;
            let path = tables_dir.join(format!("{}.csv", t.name));
            write_csv(&path, &t.columns, &t.rows)?;
            written.push(path);
        }
        for h in &o.histograms {
            create_dir(&hist_dir)?;
            let path = hist_dir.join(format!("{}.csv", h.name));
            let header = ["bin_start", "bin_end", "count"].map(String::from);
            write_csv(&path, &header, &histogram_rows(&h.histogram))?;
            written.push(path);
        }
        for a in &o.artifacts {
            let path = out_dir.join(&a.path);
            if let Some(parent) = path.parent() {
                create_dir(parent)?;
            }
            std::fs::write(&path, &a.content).map_err(|e| BenchError::io(&path, e))?;
            written.push(path);
        }
    }
    let path = out_dir.join("report.md");
    std::fs::write(&path, render_markdown(report)).map_err(|e| BenchError::io(&path, e))?;
    written.push(path);
    Ok(written)
}
