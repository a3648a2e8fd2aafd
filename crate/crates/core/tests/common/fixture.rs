//! On-disk benchmark inputs plus a lookup from rendered prompts to the
//! ground truth behind them, so mock models can answer "correctly" or with a
//! controlled distortion.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tempfile::TempDir;

use befm_core::bench::tasks::context::direction_phrase;
use befm_core::datasets::bigfive::{ipip_key, Demographics, PersonalityScores};
use befm_core::datasets::prompts;
use befm_core::datasets::{ChoiceLetter, ContestQuestion, DemographicTarget, Dimension, WorkflowRecord};
use befm_core::games::{validate_action, BehaviorSample, GameScenarioSpec, SampleSource, ScenarioId};

pub struct Subject {
    pub id: String,
    pub age: u32,
    /// Keyed item values in [`ipip_key`] order (already reverse-mapped).
    pub keyed: Vec<u8>,
}

impl Subject {
    pub fn demographics(&self) -> Demographics {
        Demographics {
            age: self.age,
            gender: Some(1 + (self.age % 3) as u8),
            race: Some(3),
            country: Some("US".into()),
            engnat: Some(1),
            hand: Some(1),
        }
    }

    /// Sum of keyed values per dimension, computed here rather than by the
    /// library scorer.
    pub fn truth(&self, dim: Dimension) -> u8 {
        ipip_key()
            .iter()
            .zip(&self.keyed)
            .filter(|(k, _)| k.dimension == dim)
            .map(|(_, v)| *v)
            .sum()
    }

    pub fn scores(&self) -> PersonalityScores {
        PersonalityScores {
            openness: self.truth(Dimension::Openness),
            conscientiousness: self.truth(Dimension::Conscientiousness),
            extroversion: self.truth(Dimension::Extroversion),
            agreeableness: self.truth(Dimension::Agreeableness),
            neuroticism: self.truth(Dimension::Neuroticism),
        }
    }
}

/// What a prompt is asking for.
#[derive(Debug, Clone, PartialEq)]
pub enum Ask {
    Trait { subject: usize, truth: u8 },
    Age { subject: usize, truth: u32 },
    Idea(String),
    Title(String),
    Ieo(ChoiceLetter),
    Game(ScenarioId),
    Context(String),
}

#[derive(Default, Clone)]
pub struct PromptBook {
    entries: HashMap<(Option<String>, String), Ask>,
}

impl PromptBook {
    fn add(&mut self, system: Option<String>, user: String, ask: Ask) {
        self.entries.insert((system, user), ask);
    }

    pub fn lookup(&self, request: &Value) -> Option<&Ask> {
        let system = super::message(request, "system").map(str::to_string);
        let user = super::user_prompt(request).to_string();
        self.entries.get(&(system, user))
    }
}

pub struct Fixture {
    pub dir: TempDir,
    pub subjects: Vec<Subject>,
    pub workflows: Vec<WorkflowRecord>,
    pub questions: Vec<ContestQuestion>,
    pub game_baselines: HashMap<ScenarioId, Vec<i64>>,
}

/// `n` subjects with distinct ages (13, 14, ...) and distinct score
/// profiles; every trait score lies in [10, 40] so shifted predictions stay
/// on the scale.
pub fn subjects(n: usize, seed: u64) -> Vec<Subject> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Subject> = Vec::new();
    while out.len() < n {
        let keyed: Vec<u8> = (0..50).map(|_| rng.random_range(1..=4)).collect();
        let s = Subject {
            id: format!("s{:03}", out.len() + 1),
            age: 13 + out.len() as u32,
            keyed,
        };
        if out.iter().all(|o| o.scores() != s.scores()) {
            out.push(s);
        }
    }
    out
}

pub fn survey_text(subjects: &[Subject]) -> String {
    let mut cols: Vec<String> = ["subject_id", "race", "age", "engnat", "gender", "hand", "source", "country"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend(ipip_key().iter().map(|k| k.item.clone()));
    let mut lines = vec![cols.join("\t")];
    for s in subjects {
        let d = s.demographics();
        let mut row = vec![
            s.id.clone(),
            "3".into(),
            s.age.to_string(),
            "1".into(),
            d.gender.unwrap().to_string(),
            "1".into(),
            "1".into(),
            "US".into(),
        ];
        for (k, v) in ipip_key().iter().zip(&s.keyed) {
            row.push(if k.reversed { 6 - v } else { *v }.to_string());
        }
        lines.push(row.join("\t"));
    }
    lines.join("\n") + "\n"
}

pub fn workflows(n: usize) -> Vec<WorkflowRecord> {
    (0..n)
        .map(|i| WorkflowRecord {
            paper_id: format!("aer{i:04}"),
            title: format!("Reciprocity and Trust in Market {i}"),
            context: format!("Prior work on market {i} left trust unexplained."),
            key_idea: format!("Measure reciprocity directly in market {i}."),
            method: "A field experiment with random assignment.".into(),
            outcome: "Reciprocity explains most observed trust.".into(),
            projected_impact: "Designs can target reciprocity.".into(),
            split: Some("eval".into()),
        })
        .collect()
}

pub fn questions(n: usize) -> Vec<ContestQuestion> {
    (0..n)
        .map(|i| ContestQuestion {
            question_id: format!("q{i:03}"),
            topic: "Microeconomics".into(),
            stem: format!("Question {i}: which option holds?"),
            choices: [
                format!("alpha {i}"),
                format!("beta {i}"),
                format!("gamma {i}"),
                format!("delta {i}"),
            ],
            answer_key: ChoiceLetter::ALL[i % 4],
        })
        .collect()
}

/// Baseline actions per scenario: a spread over each action space.
pub fn spread_baselines() -> HashMap<ScenarioId, Vec<i64>> {
    ScenarioId::ALL
        .into_iter()
        .map(|id| {
            let spec = GameScenarioSpec::default_for(id);
            let (lo, hi) = (spec.action_min(), spec.action_max());
            let values = (0..200).map(|i| lo + (i * 37) % (hi - lo + 1)).collect();
            (id, values)
        })
        .collect()
}

/// A lumpy human-like distribution over the scenario's action space.
pub fn human_like_baseline(id: ScenarioId) -> BehaviorSample {
    let spec = GameScenarioSpec::default_for(id);
    let (lo, hi) = (spec.action_min(), spec.action_max());
    let mid = (lo + hi) / 2;
    let values = (0..600i64)
        .map(|i| match i % 6 {
            0 | 1 => lo,
            2 | 3 => mid,
            4 => hi,
            _ => lo + (i * 7919) % (hi - lo + 1),
        })
        .map(|v| validate_action(&spec, v).unwrap())
        .collect();
    BehaviorSample::new(id, values, SampleSource::HumanLog).unwrap()
}

impl Fixture {
    pub fn new(n_subjects: usize, n_workflows: usize, n_questions: usize) -> Self {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
            subjects: subjects(n_subjects, 5),
            workflows: workflows(n_workflows),
            questions: questions(n_questions),
            game_baselines: spread_baselines(),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// Write every data file next to the config.
    pub fn write_data(&self) {
        std::fs::write(self.path("survey.tsv"), survey_text(&self.subjects)).unwrap();
        let wf: Vec<String> = self.workflows.iter().map(|w| serde_json::to_string(w).unwrap()).collect();
        std::fs::write(self.path("workflow.jsonl"), wf.join("\n") + "\n").unwrap();
        let qs: Vec<Value> = self
            .questions
            .iter()
            .map(|q| {
                json!({
                    "question_id": q.question_id,
                    "topic": q.topic,
                    "question": q.stem,
                    "choices": q.choices,
                    "answer": q.answer_key.to_string(),
                })
            })
            .collect();
        std::fs::write(self.path("ieo.json"), serde_json::to_string_pretty(&qs).unwrap()).unwrap();
        let mut log = vec!["scenario,subject_id,action,session_id,timestamp".to_string()];
        let mut ids: Vec<_> = self.game_baselines.keys().copied().collect();
        ids.sort();
        for id in ids {
            for (i, v) in self.game_baselines[&id].iter().enumerate() {
                log.push(format!("{id},p{i},{v},g{i},2020-01-01T00:00:00Z"));
            }
        }
        std::fs::write(self.path("games.csv"), log.join("\n") + "\n").unwrap();
    }

    /// Config with an `[endpoint]` at `base_url` followed by `tasks` (raw TOML).
    pub fn write_config(&self, base_url: &str, tasks: &str) -> PathBuf {
        let text = format!(
            "seed = 7\n\n[endpoint]\nbase_url = \"{base_url}\"\nmodel_name = \"mock-model\"\nmax_retries = 1\nbackoff_base_ms = 1\nmax_parallel = 16\ntimeout_secs = 10\n\n{tasks}"
        );
        let path = self.path("bench.toml");
        std::fs::write(&path, text).unwrap();
        path
    }

    pub fn book(&self) -> PromptBook {
        let mut book = PromptBook::default();
        for (i, s) in self.subjects.iter().enumerate() {
            let instruction = prompts::bigfive_traits_instruction(&s.demographics());
            for dim in Dimension::ALL {
                book.add(
                    Some(instruction.clone()),
                    prompts::bigfive_traits_input(dim),
                    Ask::Trait {
                        subject: i,
                        truth: s.truth(dim),
                    },
                );
            }
            book.add(
                Some(prompts::demographics_instruction()),
                prompts::demographics_input(&s.scores(), DemographicTarget::Age),
                Ask::Age { subject: i, truth: s.age },
            );
        }
        for w in &self.workflows {
            let sys = Some(prompts::workflow_instruction());
            book.add(sys.clone(), prompts::idea_generation_input(w), Ask::Idea(w.key_idea.clone()));
            book.add(sys, prompts::title_prediction_input(w), Ask::Title(w.title.clone()));
        }
        for q in &self.questions {
            book.add(Some(prompts::ieo_system_prompt()), prompts::ieo_user_prompt(q), Ask::Ieo(q.answer_key));
        }
        for spec in GameScenarioSpec::defaults() {
            book.add(None, spec.render_prompt().unwrap(), Ask::Game(spec.id()));
        }
        for dir in ["increase", "decrease"] {
            book.add(None, prompts::context_inference_prompt(direction_phrase(dir)), Ask::Context(dir.into()));
        }
        book
    }
}

/// Task sections for all six tasks over the fixture's data files.
pub fn all_tasks_toml(game_samples: usize) -> String {
    format!(
        r#"[tasks.game_distributions]
baselines = "games.csv"
sample_count = {game_samples}

[tasks.bigfive_prediction]
data = "survey.tsv"
holdout_fraction = 1.0

[tasks.age_inference]
data = "survey.tsv"
holdout_fraction = 1.0

[tasks.context_inference]
repetitions = 3
reference_keywords = ["anonymity", "social identity", "framing"]

[tasks.workflow_reasoning]
data = "workflow.jsonl"

[tasks.ieo_contest]
questions = "ieo.json"
"#
    )
}

/// Mock replies that return the ground truth for every prompt in the book.
pub fn echo_truth(ask: &Ask) -> String {
    match ask {
        Ask::Trait { truth, .. } => format!("[{truth}]"),
        Ask::Age { truth, .. } => format!("[{truth}]"),
        Ask::Idea(t) | Ask::Title(t) => t.clone(),
        Ask::Ieo(l) => l.to_string(),
        Ask::Game(id) => {
            let spec = GameScenarioSpec::default_for(*id);
            befm_core::games::format_action(&spec, (spec.action_min() + spec.action_max()) / 2)
        }
        Ask::Context(dir) => format!("To see sharing {dir}, vary anonymity, social identity and framing."),
    }
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
