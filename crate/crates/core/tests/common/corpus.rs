//! The checked-in completion corpus and its expected parse results.

use serde::Deserialize;

use befm_core::bench::tasks::ieo::parse_choice_letter;
use befm_core::games::{parse_game_response, GameError, GameScenarioSpec, ScenarioId};

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Case {
    Game { scenario: ScenarioId, text: String, expect: GameExpect },
    Ieo { text: String, expect: IeoExpect },
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum GameExpect {
    Action(i64),
    Error(String),
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum IeoExpect {
    Letter(char),
    Error(String),
}

fn corpus() -> Vec<Case> {
    let path = super::fixture_path("parser_corpus.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn matches(case: &Case) -> bool {
    match case {
        Case::Game { scenario, text, expect } => {
            let got = parse_game_response(&GameScenarioSpec::default_for(*scenario), text);
            match (expect, &got) {
                (GameExpect::Action(v), Ok(a)) => a.value() == *v,
                (GameExpect::Error(e), Err(GameError::NoBracketedInteger)) => e == "no_bracketed_integer",
                (GameExpect::Error(e), Err(GameError::OutOfRange { .. })) => e == "out_of_range",
                _ => false,
            }
        }
        Case::Ieo { text, expect } => match (expect, parse_choice_letter(text)) {
            (IeoExpect::Letter(c), Some(l)) => l.as_char() == *c,
            (IeoExpect::Error(e), None) => e == "unparseable",
            _ => false,
        },
    }
}

/// Corpus size and the indices of cases whose parse disagrees with the
/// expectation.
pub fn check() -> (usize, Vec<usize>) {
    let cases = corpus();
    let bad = cases.iter().enumerate().filter(|(_, c)| !matches(c)).map(|(i, _)| i).collect();
    (cases.len(), bad)
}
