//! Multiple-choice contest questions (JSON array).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::DatasetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChoiceLetter {
    A,
    B,
    C,
    D,
}

impl ChoiceLetter {
    pub const ALL: [ChoiceLetter; 4] = [ChoiceLetter::A, ChoiceLetter::B, ChoiceLetter::C, ChoiceLetter::D];

    pub fn as_char(self) -> char {
        match self {
            ChoiceLetter::A => 'A',
            ChoiceLetter::B => 'B',
            ChoiceLetter::C => 'C',
            ChoiceLetter::D => 'D',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'A' => Some(ChoiceLetter::A),
            'B' => Some(ChoiceLetter::B),
            'C' => Some(ChoiceLetter::C),
            'D' => Some(ChoiceLetter::D),
            _ => None,
        }
    }
}

impl fmt::Display for ChoiceLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for ChoiceLetter {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next().and_then(Self::from_char), chars.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(DatasetError::InvalidArgument(format!("`{s}` is not one of A, B, C, D"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContestQuestion {
    pub question_id: String,
    pub topic: String,
    pub stem: String,
    /// Choice texts for A, B, C, D.
    pub choices: [String; 4],
    pub answer_key: ChoiceLetter,
}

pub fn load_ieo_json(path: &Path) -> Result<Vec<ContestQuestion>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_ieo_json(&text)
}

/// Each element needs `question_id`, `topic`, `question`, `choices` (an
/// object keyed A-D or an array of four strings) and `answer`. Questions
/// flagged `requires_image: true` are rejected.
pub fn parse_ieo_json(text: &str) -> Result<Vec<ContestQuestion>, DatasetError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DatasetError::Schema(format!("invalid JSON: {e}")))?;
    let items = value
        .as_array()
        .ok_or_else(|| DatasetError::Schema("expected a JSON array of questions".into()))?;
    items.iter().enumerate().map(|(i, v)| parse_question(i, v)).collect()
}

fn parse_question(index: usize, value: &Value) -> Result<ContestQuestion, DatasetError> {
    let err = |message: String| DatasetError::Record { index, message };
    let obj = value.as_object().ok_or_else(|| err("expected an object".into()))?;
    let text = |name: &str| -> Result<String, DatasetError> {
        match obj.get(name) {
            Some(Value::String(s)) if !s.trim().is_empty() => Ok(s.clone()),
            Some(Value::Number(n)) if name == "question_id" => Ok(n.to_string()),
            Some(_) => Err(err(format!("field `{name}` must be a non-empty string"))),
            None => Err(err(format!("missing required field `{name}`"))),
        }
    };
    if obj.get("requires_image").and_then(Value::as_bool) == Some(true) {
        return Err(err("question depends on an image".into()));
    }
    let choices: Vec<String> = match obj.get("choices") {
        Some(Value::Array(arr)) => arr
            .iter()
            .map(|c| c.as_str().map(str::to_string))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| err("choices must be strings".into()))?,
        Some(Value::Object(map)) => {
            if map.len() != 4 {
                return Err(err(format!("expected exactly four choices, found {}", map.len())));
            }
            ChoiceLetter::ALL
                .iter()
                .map(|l| map.get(&l.to_string()).and_then(Value::as_str).map(str::to_string))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err("choices must be keyed A, B, C, D".into()))?
        }
        Some(_) => return Err(err("choices must be an array or an object".into())),
        None => return Err(err("missing required field `choices`".into())),
    };
    let choices: [String; 4] = choices
        .try_into()
        .map_err(|v: Vec<String>| err(format!("expected exactly four choices, found {}", v.len())))?;
    let answer_key = text("answer")?
        .parse::<ChoiceLetter>()
        .map_err(|e| err(e.to_string()))?;
    Ok(ContestQuestion {
        question_id: text("question_id")?,
        topic: text("topic")?,
        stem: text("question")?,
        choices,
        answer_key,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn q(choices: Value) -> String {
        json!([{
            "question_id": "2021-3",
            "topic": "Behavioral economics",
            "question": "Which bias?",
            "choices": choices,
            "answer": "C"
        }])
        .to_string()
    }

    #[test]
    fn array_and_object_choices() {
        let a = parse_ieo_json(&q(json!(["w", "x", "y", "z"]))).unwrap();
        let o = parse_ieo_json(&q(json!({"A": "w", "B": "x", "C": "y", "D": "z"}))).unwrap();
        assert_eq!(a, o);
        assert_eq!(a[0].answer_key, ChoiceLetter::C);
        assert_eq!(a[0].choices[3], "z");
    }

    #[test]
    fn three_choices_rejected() {
        let err = parse_ieo_json(&q(json!(["w", "x", "y"]))).unwrap_err();
        assert!(matches!(err, DatasetError::Record { index: 0, message } if message.contains("four")));
    }

    #[test]
    fn image_questions_rejected() {
        let text = json!([{"question_id": 1, "topic": "t", "question": "q", "choices": ["a","b","c","d"],
                           "answer": "A", "requires_image": true}])
        .to_string();
        assert!(parse_ieo_json(&text).is_err());
    }

    #[test]
    fn bad_answer_letter() {
        let text = q(json!(["w", "x", "y", "z"])).replace("\"C\"", "\"E\"");
        assert!(parse_ieo_json(&text).is_err());
    }
}
