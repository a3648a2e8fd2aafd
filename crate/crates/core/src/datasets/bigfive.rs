//! Big Five (IPIP 50-item) survey records: loading, cleaning and scoring.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::DatasetError;

pub const ITEM_COUNT: usize = 50;
pub const MIN_AGE: u32 = 13;
pub const MAX_AGE: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Openness,
    Conscientiousness,
    Extroversion,
    Agreeableness,
    Neuroticism,
}

impl Dimension {
    /// OCEAN order.
    pub const ALL: [Dimension; 5] = [
        Dimension::Openness,
        Dimension::Conscientiousness,
        Dimension::Extroversion,
        Dimension::Agreeableness,
        Dimension::Neuroticism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Openness => "openness",
            Dimension::Conscientiousness => "conscientiousness",
            Dimension::Extroversion => "extroversion",
            Dimension::Agreeableness => "agreeableness",
            Dimension::Neuroticism => "neuroticism",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Dimension::Openness => "Openness",
            Dimension::Conscientiousness => "Conscientiousness",
            Dimension::Extroversion => "Extroversion",
            Dimension::Agreeableness => "Agreeableness",
            Dimension::Neuroticism => "Neuroticism",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dimension {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| DatasetError::InvalidArgument(format!("unknown personality dimension `{s}`")))
    }
}

/// One row of the vendored IPIP key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyedItem {
    pub item: String,
    pub dimension: Dimension,
    pub reversed: bool,
}

static IPIP_KEY: LazyLock<Vec<KeyedItem>> = LazyLock::new(|| {
    let raw = include_str!("../../data/ipip50_key.csv");
    let mut reader = csv::Reader::from_reader(raw.as_bytes());
    let key: Vec<KeyedItem> = reader
        .records()
        .map(|row| {
            let row = row.expect("vendored key parses");
            KeyedItem {
                item: row[0].to_string(),
                dimension: row[1].parse().expect("vendored key dimension"),
                reversed: &row[2] == "minus",
            }
        })
        .collect();
    assert_eq!(key.len(), ITEM_COUNT, "vendored key must list 50 items");
    key
});

/// Item ids in response order (E1..E10, N1..N10, A1..A10, C1..C10, O1..O10).
pub fn ipip_key() -> &'static [KeyedItem] {
    &IPIP_KEY
}

/// Demographic fields from the public survey export. Codes follow the
/// dataset's codebook; 0 or blank means "not answered".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demographics {
    pub age: u32,
    pub gender: Option<u8>,
    pub race: Option<u8>,
    pub country: Option<String>,
    pub engnat: Option<u8>,
    pub hand: Option<u8>,
}

fn race_label(code: u8) -> Option<&'static str> {
    Some(match code {
        1 => "Mixed Race",
        2 => "Arctic (Siberian, Eskimo)",
        3 => "Caucasian (European)",
        4 => "Caucasian (Indian)",
        5 => "Caucasian (Middle East)",
        6 => "Caucasian (North African, Other)",
        7 => "Indigenous Australian",
        8 => "Native American",
        9 => "North East Asian (Mongol, Tibetan, Korean Japanese, etc)",
        10 => "Pacific (Polynesian, Micronesian, etc)",
        11 => "South East Asian (Chinese, Thai, Malay, Filipino, etc)",
        12 => "West African, Bushmen, Ethiopian",
        13 => "Other",
        _ => return None,
    })
}

/// Gender codes as used in the demographics prompt: 1=Male, 2=Female, 3=Other.
pub fn gender_label(code: u8) -> Option<&'static str> {
    match code {
        1 => Some("Male"),
        2 => Some("Female"),
        3 => Some("Other"),
        _ => None,
    }
}

impl Demographics {
    /// Text substituted for `{demographics}` in the trait-prediction prompt,
    /// e.g. `age: 53; gender: Male; race: Caucasian (European); country: US;
    /// native English speaker: yes; handedness: right`. Unanswered fields are
    /// omitted.
    pub fn describe(&self) -> String {
        let mut parts = vec![format!("age: {}", self.age)];
        if let Some(g) = self.gender.and_then(gender_label) {
            parts.push(format!("gender: {g}"));
        }
        if let Some(r) = self.race.and_then(race_label) {
            parts.push(format!("race: {r}"));
        }
        if let Some(c) = &self.country {
            parts.push(format!("country: {c}"));
        }
        match self.engnat {
            Some(1) => parts.push("native English speaker: yes".into()),
            Some(2) => parts.push("native English speaker: no".into()),
            _ => {}
        }
        match self.hand {
            Some(1) => parts.push("handedness: right".into()),
            Some(2) => parts.push("handedness: left".into()),
            Some(3) => parts.push("handedness: both".into()),
            _ => {}
        }
        parts.join("; ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub subject_id: String,
    pub demographics: Demographics,
    /// Responses in [`ipip_key`] order; `None` marks an unanswered item.
    pub responses: Vec<Option<u8>>,
}

impl SurveyRecord {
    pub fn response(&self, item: &str) -> Option<u8> {
        let idx = ipip_key().iter().position(|k| k.item == item)?;
        self.responses.get(idx).copied().flatten()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PersonalityScores {
    pub openness: u8,
    pub conscientiousness: u8,
    pub extroversion: u8,
    pub agreeableness: u8,
    pub neuroticism: u8,
}

impl PersonalityScores {
    pub fn get(&self, dim: Dimension) -> u8 {
        match dim {
            Dimension::Openness => self.openness,
            Dimension::Conscientiousness => self.conscientiousness,
            Dimension::Extroversion => self.extroversion,
            Dimension::Agreeableness => self.agreeableness,
            Dimension::Neuroticism => self.neuroticism,
        }
    }
}

/// Sum the ten items of each dimension, mapping reverse-keyed responses
/// `r -> 6 - r`. Each score lies in [10, 50].
pub fn score_bigfive(record: &SurveyRecord) -> Result<PersonalityScores, DatasetError> {
    let mut sums: BTreeMap<Dimension, u32> = BTreeMap::new();
    for (idx, key) in ipip_key().iter().enumerate() {
        let response = record
            .responses
            .get(idx)
            .copied()
            .flatten()
            .filter(|r| (1..=5).contains(r))
            .ok_or_else(|| DatasetError::IncompleteRecord {
                subject_id: record.subject_id.clone(),
                item: key.item.clone(),
            })?;
        let keyed = if key.reversed { 6 - response } else { response };
        *sums.entry(key.dimension).or_default() += u32::from(keyed);
    }
    let get = |d: Dimension| sums.get(&d).copied().unwrap_or(0) as u8;
    Ok(PersonalityScores {
        openness: get(Dimension::Openness),
        conscientiousness: get(Dimension::Conscientiousness),
        extroversion: get(Dimension::Extroversion),
        agreeableness: get(Dimension::Agreeableness),
        neuroticism: get(Dimension::Neuroticism),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    ImplausibleAge,
    MissingItems,
    InvalidItem,
    MalformedRow,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::ImplausibleAge => "implausible_age",
            DropReason::MissingItems => "missing_items",
            DropReason::InvalidItem => "invalid_item",
            DropReason::MalformedRow => "malformed_row",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFiveLoad {
    pub records: Vec<SurveyRecord>,
    pub rows_read: usize,
    pub dropped: BTreeMap<DropReason, usize>,
}

impl BigFiveLoad {
    pub fn dropped_total(&self) -> usize {
        self.dropped.values().sum()
    }
}

const REQUIRED_DEMOGRAPHICS: [&str; 5] = ["race", "age", "engnat", "gender", "country"];

fn detect_delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or_default();
    if header.contains('\t') {
        b'\t'
    } else {
        b','
    }
}

fn optional_code(field: Option<&str>) -> Option<u8> {
    field
        .and_then(|f| f.trim().parse::<u8>().ok())
        .filter(|&c| c != 0)
}

/// Load the public Big Five export (tab- or comma-separated). Rows with an
/// age outside [13, 100] or with unanswered/invalid items are dropped and
/// counted by reason.
pub fn load_bigfive_csv(path: &Path) -> Result<BigFiveLoad, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_bigfive(&text)
}

pub fn parse_bigfive(text: &str) -> Result<BigFiveLoad, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(text))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| DatasetError::Schema(e.to_string()))?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);

    let mut missing: Vec<String> = REQUIRED_DEMOGRAPHICS
        .iter()
        .filter(|c| column(c).is_none())
        .map(|c| c.to_string())
        .collect();
    let item_columns: Vec<Option<usize>> = ipip_key().iter().map(|k| column(&k.item)).collect();
    missing.extend(
        ipip_key()
            .iter()
            .zip(&item_columns)
            .filter(|(_, c)| c.is_none())
            .map(|(k, _)| k.item.clone()),
    );
    if !missing.is_empty() {
        return Err(DatasetError::MissingColumns(missing));
    }
    let id_column = column("subject_id").or_else(|| column("id"));
    let col = |name: &str| column(name).expect("checked above");

    let mut load = BigFiveLoad {
        records: Vec::new(),
        rows_read: 0,
        dropped: BTreeMap::new(),
    };
    for (row_idx, row) in reader.records().enumerate() {
        load.rows_read += 1;
        let Ok(row) = row else {
            *load.dropped.entry(DropReason::MalformedRow).or_default() += 1;
            continue;
        };
        if row.len() != headers.len() {
            *load.dropped.entry(DropReason::MalformedRow).or_default() += 1;
            continue;
        }
        let age = row[col("age")].parse::<u32>().ok().filter(|a| (MIN_AGE..=MAX_AGE).contains(a));
        let Some(age) = age else {
            *load.dropped.entry(DropReason::ImplausibleAge).or_default() += 1;
            continue;
        };
        let mut responses = Vec::with_capacity(ITEM_COUNT);
        let mut reason = None;
        for c in &item_columns {
            let raw = &row[c.expect("checked above")];
            match raw.parse::<u8>() {
                Ok(v @ 1..=5) => responses.push(Some(v)),
                Ok(0) | Err(_) if raw.is_empty() || raw == "0" => {
                    reason.get_or_insert(DropReason::MissingItems);
                    responses.push(None);
                }
                _ => {
                    reason.get_or_insert(DropReason::InvalidItem);
                    responses.push(None);
                }
            }
        }
        if let Some(reason) = reason {
            *load.dropped.entry(reason).or_default() += 1;
            continue;
        }
        let country = row[col("country")].to_string();
        let demographics = Demographics {
            age,
            gender: optional_code(row.get(col("gender"))),
            race: optional_code(row.get(col("race"))),
            country: (!country.is_empty() && country != "(nu)").then_some(country),
            engnat: optional_code(row.get(col("engnat"))),
            hand: column("hand").and_then(|c| optional_code(row.get(c))),
        };
        let subject_id = id_column
            .map(|c| row[c].to_string())
            .unwrap_or_else(|| (row_idx + 1).to_string());
        load.records.push(SurveyRecord {
            subject_id,
            demographics,
            responses,
        });
    }
    Ok(load)
}
