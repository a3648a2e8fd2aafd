//! Economics Olympiad multiple choice: accuracy over question x run outcomes.

use std::collections::HashMap;
use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;

use super::{session_status, SessionCounts, Table, TaskDetails, TaskOutcome};
use crate::bench::raw::RawCompletion;
use crate::bench::source::Query;
use crate::bench::{BenchError, TaskId};
use crate::datasets::prompts;
use crate::datasets::{ChoiceLetter, ContestQuestion};

static STANDALONE_LETTER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b([A-D])\b").expect("static regex"));

/// First standalone capital A-D in the reply. A reply that is a single
/// lowercase letter (with optional punctuation) is also accepted.
pub fn parse_choice_letter(text: &str) -> Option<ChoiceLetter> {
    if let Some(c) = STANDALONE_LETTER.captures(text) {
        return c[1].chars().next().and_then(ChoiceLetter::from_char);
    }
    let core = text.trim().trim_matches(|c: char| !c.is_alphanumeric());
    let mut chars = core.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => ChoiceLetter::from_char(c.to_ascii_uppercase()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IeoResults {
    pub outcomes: usize,
    pub correct: usize,
    pub unparseable: usize,
    pub accuracy: Option<f64>,
}

fn key(pos: usize, q: &ContestQuestion) -> String {
    format!("{pos}/{}", q.question_id)
}

pub fn plan(questions: &[ContestQuestion], runs: usize) -> Vec<Query> {
    let system = prompts::ieo_system_prompt();
    questions
        .iter()
        .enumerate()
        .map(|(pos, q)| Query::new(key(pos, q), Some(system.clone()), prompts::ieo_user_prompt(q), runs))
        .collect()
}

pub fn score(questions: &[ContestQuestion], records: &[RawCompletion], model: &str) -> Result<TaskOutcome, BenchError> {
    let answer: HashMap<String, ChoiceLetter> = questions
        .iter()
        .enumerate()
        .map(|(pos, q)| (key(pos, q), q.answer_key))
        .collect();
    let mut counts = SessionCounts::default();
    let mut correct = 0;
    for r in records {
        let Some(&expected) = answer.get(&r.key) else {
            continue;
        };
        counts.issued += 1;
        let Some(text) = &r.text else {
            counts.failed += 1;
            continue;
        };
        match parse_choice_letter(text) {
            Some(letter) => {
                counts.parsed += 1;
                if letter == expected {
                    correct += 1;
                }
            }
            None => counts.unparseable += 1,
        }
    }
    // unparseable replies count as incorrect outcomes
    let outcomes = counts.parsed + counts.unparseable;
    let accuracy = (outcomes > 0).then(|| correct as f64 / outcomes as f64);
    let results = IeoResults {
        outcomes,
        correct,
        unparseable: counts.unparseable,
        accuracy,
    };

    let mut table = Table::new(
        "ieo_contest",
        "Economics Olympiad accuracy",
        &["Model", "Accuracy (%)", "Outcomes", "Correct", "Unparseable", "Failed"],
    );
    table.push(vec![
        model.to_string(),
        accuracy.map(|a| format!("{:.1}", a * 100.0)).unwrap_or_else(|| "n/a".into()),
        outcomes.to_string(),
        correct.to_string(),
        counts.unparseable.to_string(),
        counts.failed.to_string(),
    ]);
    Ok(TaskOutcome {
        task: TaskId::IeoContest,
        status: session_status(records),
        counts,
        tables: vec![table],
        histograms: Vec::new(),
        artifacts: Vec::new(),
        notes: vec![format!(
            "{} questions; the first standalone letter A-D is the answer; unparseable replies count as incorrect.",
            questions.len()
        )],
        details: TaskDetails::Ieo(results),
        raw_log: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters() {
        assert_eq!(parse_choice_letter("B"), Some(ChoiceLetter::B));
        assert_eq!(parse_choice_letter(" (C).\n"), Some(ChoiceLetter::C));
        assert_eq!(parse_choice_letter("The answer is D."), Some(ChoiceLetter::D));
        assert_eq!(parse_choice_letter("d"), Some(ChoiceLetter::D));
        assert_eq!(parse_choice_letter("E"), None);
        assert_eq!(parse_choice_letter("Answer: none"), None);
        assert_eq!(parse_choice_letter(""), None);
    }
}
