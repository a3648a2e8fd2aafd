//! The six benchmark tasks. Each exposes `plan` (queries to issue) and
//! `score` (a pure function of the raw completions and the task data).

pub mod context;
pub mod games;
pub mod ieo;
pub mod survey;
pub mod workflow;

use serde::Serialize;

use super::raw::{RawCompletion, RawErrorKind};
use super::TaskId;
use crate::client::is_degraded;
use crate::metrics::{
    mean_absolute_error, smoothed_ks_test, spearman_correlation, wasserstein_distance, EmpiricalSample, HistogramSpec,
    MetricError, MetricResult, Spearman,
};

/// Session bookkeeping. `parsed + out_of_range + unparseable + failed`
/// always equals `issued`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SessionCounts {
    pub issued: usize,
    pub parsed: usize,
    pub out_of_range: usize,
    pub unparseable: usize,
    pub failed: usize,
}

impl SessionCounts {
    pub fn excluded(&self) -> usize {
        self.out_of_range + self.unparseable
    }

    pub fn is_conserved(&self) -> bool {
        self.parsed + self.excluded() + self.failed == self.issued
    }

    pub fn add(&mut self, other: &SessionCounts) {
        self.issued += other.issued;
        self.parsed += other.parsed;
        self.out_of_range += other.out_of_range;
        self.unparseable += other.unparseable;
        self.failed += other.failed;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TaskStatus {
    Complete,
    /// More than 20% of sessions failed; metrics use the successful subset.
    Degraded { failed: usize, issued: usize },
    /// Every session failed at the transport level.
    TransportFailure { issued: usize },
    /// Not run or not scoreable; the message says why.
    Failed(String),
}

impl TaskStatus {
    pub fn label(&self) -> String {
        match self {
            TaskStatus::Complete => "complete".into(),
            TaskStatus::Degraded { failed, issued } => format!("degraded ({failed} of {issued} sessions failed)"),
            TaskStatus::TransportFailure { issued } => format!("transport failure (all {issued} sessions failed)"),
            TaskStatus::Failed(m) => format!("failed: {m}"),
        }
    }
}

/// Status implied by the transport outcome of a task's sessions.
pub fn session_status(records: &[RawCompletion]) -> TaskStatus {
    let issued = records.len();
    let failed = records.iter().filter(|r| !r.is_success()).count();
    let all_transport = issued > 0
        && records
            .iter()
            .all(|r| matches!(&r.error, Some(e) if e.kind == RawErrorKind::Transport));
    if all_transport {
        TaskStatus::TransportFailure { issued }
    } else if is_degraded(failed, issued) {
        TaskStatus::Degraded { failed, issued }
    } else {
        TaskStatus::Complete
    }
}

/// A rendered table: Markdown in the report (unless `csv_only`) and
/// `tables/<name>.csv`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub csv_only: bool,
}

impl Table {
    pub fn new(name: &str, title: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            csv_only: false,
        }
    }

    pub fn csv_only(mut self) -> Self {
        self.csv_only = true;
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Histogram written to `histograms/<name>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedHistogram {
    pub name: String,
    pub histogram: HistogramSpec,
}

/// Verbatim text file written under the output directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    pub path: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TaskDetails {
    Games(games::GameResults),
    Survey(survey::SurveyResults),
    Context(context::ContextResults),
    Workflow(workflow::WorkflowResults),
    Ieo(ieo::IeoResults),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskOutcome {
    pub task: TaskId,
    pub status: TaskStatus,
    pub counts: SessionCounts,
    pub tables: Vec<Table>,
    pub histograms: Vec<NamedHistogram>,
    pub artifacts: Vec<Artifact>,
    pub notes: Vec<String>,
    pub details: TaskDetails,
    /// Relative path of the raw completion log, when one exists.
    pub raw_log: Option<String>,
}

impl TaskOutcome {
    pub fn failed(task: TaskId, message: impl Into<String>) -> Self {
        TaskOutcome {
            task,
            status: TaskStatus::Failed(message.into()),
            counts: SessionCounts::default(),
            tables: Vec::new(),
            histograms: Vec::new(),
            artifacts: Vec::new(),
            notes: Vec::new(),
            details: TaskDetails::None,
            raw_log: None,
        }
    }
}

/// Fixed-precision number for tables.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.4}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_else(|| "n/a".into())
}

/// Individual- and distribution-level comparison of predictions with
/// ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedMetrics {
    pub n: usize,
    pub mae: Option<f64>,
    /// `None` with a reason when the correlation is undefined.
    pub spearman: Option<Spearman>,
    pub spearman_note: Option<String>,
    pub wasserstein: Option<f64>,
    pub ks: Option<MetricResult>,
}

impl PairedMetrics {
    pub fn compute(pred: &[f64], truth: &[f64], ks_bin_width: Option<f64>) -> Result<Self, MetricError> {
        if pred.is_empty() {
            return Ok(PairedMetrics {
                n: 0,
                mae: None,
                spearman: None,
                spearman_note: Some("no parsed predictions".into()),
                wasserstein: None,
                ks: None,
            });
        }
        let p = EmpiricalSample::new("prediction", pred.to_vec())?;
        let t = EmpiricalSample::new("truth", truth.to_vec())?;
        let (spearman, spearman_note) = match spearman_correlation(&p, &t) {
            Ok(s) => (Some(s), None),
            Err(e @ (MetricError::UndefinedCorrelation(_) | MetricError::TooFew { .. })) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        let ks = match ks_bin_width {
            Some(w) => Some(smoothed_ks_test(&p, &t, w)?),
            None => None,
        };
        Ok(PairedMetrics {
            n: pred.len(),
            mae: Some(mean_absolute_error(&p, &t)?),
            spearman,
            spearman_note,
            wasserstein: Some(wasserstein_distance(&p, &t)?),
            ks,
        })
    }

    pub fn rho_cell(&self) -> String {
        match &self.spearman {
            Some(s) => fmt_num(s.rho),
            None => "undefined".into(),
        }
    }

    pub fn p_cell(&self) -> String {
        self.spearman.as_ref().map(|s| fmt_num(s.p_value)).unwrap_or_else(|| "n/a".into())
    }
}

/// Unweighted mean; `None` if any input is missing.
pub fn mean_all(values: impl IntoIterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v?;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::raw::RawError;

    fn rec(ok: bool, kind: RawErrorKind) -> RawCompletion {
        RawCompletion {
            task: "t".into(),
            key: "k".into(),
            index: 0,
            session_id: "s".into(),
            text: ok.then(|| "x".into()),
            error: (!ok).then(|| RawError {
                kind,
                message: "m".into(),
            }),
            attempt_count: 1,
            latency_ms: 0,
        }
    }

    #[test]
    fn status_classification() {
        let mut recs: Vec<_> = (0..8).map(|_| rec(true, RawErrorKind::Other)).collect();
        recs.extend((0..2).map(|_| rec(false, RawErrorKind::Transport)));
        assert_eq!(session_status(&recs), TaskStatus::Complete);
        recs.push(rec(false, RawErrorKind::Request));
        assert!(matches!(session_status(&recs), TaskStatus::Degraded { failed: 3, issued: 11 }));
        let all: Vec<_> = (0..3).map(|_| rec(false, RawErrorKind::Transport)).collect();
        assert_eq!(session_status(&all), TaskStatus::TransportFailure { issued: 3 });
    }

    #[test]
    fn mean_all_requires_every_value() {
        assert_eq!(mean_all([Some(1.0), Some(3.0)]), Some(2.0));
        assert_eq!(mean_all([Some(1.0), None]), None);
        assert_eq!(mean_all(std::iter::empty()), None);
    }

    #[test]
    fn constant_predictor_is_undefined_not_an_error() {
        let m = PairedMetrics::compute(&[30.0; 4], &[10.0, 20.0, 30.0, 40.0], Some(10.0)).unwrap();
        assert!(m.spearman.is_none());
        assert_eq!(m.rho_cell(), "undefined");
        assert_eq!(m.mae, Some(10.0));
    }
}
