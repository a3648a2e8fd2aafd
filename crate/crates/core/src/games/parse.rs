use std::sync::LazyLock;

use regex::Regex;

use super::{validate_action, ActionUnit, ActionValue, GameError, GameScenarioSpec};

/// `[50]`, `[$50]`, `[ $ 50 ]`, `[€50.00]`: an optional currency symbol
/// followed by an integer (a zero fractional part is tolerated).
static BRACKETED_INTEGER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\[\s*\p{Sc}?\s*([+-]?\d+)(?:\.0+)?\s*\]").expect("static regex"));

/// The first bracketed integer in `text`, if any. Values beyond `i64`
/// saturate.
pub fn parse_bracketed_integer(text: &str) -> Option<i64> {
    let caps = BRACKETED_INTEGER.captures(text)?;
    let digits = &caps[1];
    Some(digits.parse::<i64>().unwrap_or(if digits.starts_with('-') {
        i64::MIN
    } else {
        i64::MAX
    }))
}

/// Parse the first bracketed integer in `text` and validate it against the
/// scenario's action space. Later brackets are ignored.
pub fn parse_game_response(spec: &GameScenarioSpec, text: &str) -> Result<ActionValue, GameError> {
    let value = parse_bracketed_integer(text).ok_or(GameError::NoBracketedInteger)?;
    validate_action(spec, value)
}

/// The canonical bracketed reply for an action: `[$50]` or `[20]`.
pub fn format_action(spec: &GameScenarioSpec, value: i64) -> String {
    match spec.action_unit() {
        ActionUnit::Dollars => format!("[${value}]"),
        ActionUnit::Boxes => format!("[{value}]"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::ScenarioId;

    fn spec(id: ScenarioId) -> GameScenarioSpec {
        GameScenarioSpec::default_for(id)
    }

    #[test]
    fn dollar_bracket() {
        assert_eq!(parse_game_response(&spec(ScenarioId::Dictator), "[$50]").unwrap().value(), 50);
    }

    #[test]
    fn boxes_in_prose() {
        let v = parse_game_response(&spec(ScenarioId::Bomb), "I will open [20] boxes.").unwrap();
        assert_eq!(v.value(), 20);
    }

    #[test]
    fn words_are_not_numbers() {
        assert_eq!(
            parse_game_response(&spec(ScenarioId::Dictator), "fifty dollars"),
            Err(GameError::NoBracketedInteger)
        );
    }

    #[test]
    fn first_bracket_wins_and_non_integer_brackets_are_skipped() {
        let s = spec(ScenarioId::Dictator);
        assert_eq!(parse_game_response(&s, "[$30] or maybe [$40]").unwrap().value(), 30);
        assert_eq!(parse_game_response(&s, "[option A] gives [$25]").unwrap().value(), 25);
        assert_eq!(parse_game_response(&s, "[$12.50] then [$10]").unwrap().value(), 10);
        assert_eq!(parse_game_response(&s, "[ $ 7 ]").unwrap().value(), 7);
        assert_eq!(parse_game_response(&s, "[$20.00]").unwrap().value(), 20);
    }

    #[test]
    fn out_of_range_is_distinct_from_unparseable() {
        let s = spec(ScenarioId::Dictator);
        assert!(matches!(parse_game_response(&s, "[$150]"), Err(GameError::OutOfRange { value: 150, .. })));
        assert!(matches!(parse_game_response(&s, "[-5]"), Err(GameError::OutOfRange { value: -5, .. })));
        assert!(matches!(
            parse_game_response(&s, "[99999999999999999999999]"),
            Err(GameError::OutOfRange { value: i64::MAX, .. })
        ));
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_action(&spec(ScenarioId::Dictator), 50), "[$50]");
        assert_eq!(format_action(&spec(ScenarioId::Bomb), 20), "[20]");
    }
}
