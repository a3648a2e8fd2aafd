use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GameError;
use crate::metrics::{EmpiricalSample, MetricError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioId {
    Dictator,
    UltimatumProposer,
    UltimatumResponder,
    TrustInvestor,
    TrustBanker,
    PublicGoods,
    Bomb,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 7] = [
        ScenarioId::Dictator,
        ScenarioId::UltimatumProposer,
        ScenarioId::UltimatumResponder,
        ScenarioId::TrustInvestor,
        ScenarioId::TrustBanker,
        ScenarioId::PublicGoods,
        ScenarioId::Bomb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Dictator => "dictator",
            ScenarioId::UltimatumProposer => "ultimatum_proposer",
            ScenarioId::UltimatumResponder => "ultimatum_responder",
            ScenarioId::TrustInvestor => "trust_investor",
            ScenarioId::TrustBanker => "trust_banker",
            ScenarioId::PublicGoods => "public_goods",
            ScenarioId::Bomb => "bomb",
        }
    }

    /// Column heading used in report tables.
    pub fn column_name(self) -> &'static str {
        match self {
            ScenarioId::Dictator => "Dictator",
            ScenarioId::UltimatumProposer => "Proposer",
            ScenarioId::UltimatumResponder => "Responder",
            ScenarioId::TrustInvestor => "Investor",
            ScenarioId::TrustBanker => "Banker",
            ScenarioId::PublicGoods => "Public Goods",
            ScenarioId::Bomb => "Bomb",
        }
    }

    pub fn unit(self) -> ActionUnit {
        match self {
            ScenarioId::Bomb => ActionUnit::Boxes,
            _ => ActionUnit::Dollars,
        }
    }

    fn default_template(self) -> &'static str {
        match self {
            ScenarioId::Dictator => include_str!("../../templates/games/dictator.txt"),
            ScenarioId::UltimatumProposer => include_str!("../../templates/games/ultimatum_proposer.txt"),
            ScenarioId::UltimatumResponder => include_str!("../../templates/games/ultimatum_responder.txt"),
            ScenarioId::TrustInvestor => include_str!("../../templates/games/trust_investor.txt"),
            ScenarioId::TrustBanker => include_str!("../../templates/games/trust_banker.txt"),
            ScenarioId::PublicGoods => include_str!("../../templates/games/public_goods.txt"),
            ScenarioId::Bomb => include_str!("../../templates/games/bomb.txt"),
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| GameError::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionUnit {
    Dollars,
    Boxes,
}

/// One game role: prompt template plus its integer action space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameScenarioSpec {
    id: ScenarioId,
    prompt_template: String,
    action_min: i64,
    action_max: i64,
    action_unit: ActionUnit,
    endowment: Option<i64>,
}

/// Per-run overrides, as read from a `[games.<id>]` config section.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOverrides {
    pub action_min: Option<i64>,
    pub action_max: Option<i64>,
    pub endowment: Option<i64>,
    pub prompt_template_path: Option<PathBuf>,
}

impl GameScenarioSpec {
    pub fn new(
        id: ScenarioId,
        prompt_template: impl Into<String>,
        action_min: i64,
        action_max: i64,
        endowment: Option<i64>,
    ) -> Result<Self, GameError> {
        if action_min > action_max {
            return Err(GameError::InvalidActionSpace {
                scenario: id,
                min: action_min,
                max: action_max,
            });
        }
        Ok(Self {
            id,
            prompt_template: prompt_template.into().trim_end().to_string(),
            action_min,
            action_max,
            action_unit: id.unit(),
            endowment,
        })
    }

    /// Defaults: a 100-unit endowment for the split games, returns out of
    /// the tripled transfer for the banker, 20 for public goods and 1..=100
    /// boxes for the bomb game.
    pub fn default_for(id: ScenarioId) -> Self {
        let (min, max, endowment) = match id {
            ScenarioId::Dictator
            | ScenarioId::UltimatumProposer
            | ScenarioId::UltimatumResponder
            | ScenarioId::TrustInvestor => (0, 100, Some(100)),
            ScenarioId::TrustBanker => (0, 300, Some(100)),
            ScenarioId::PublicGoods => (0, 20, Some(20)),
            ScenarioId::Bomb => (1, 100, None),
        };
        Self::new(id, id.default_template(), min, max, endowment).expect("default action spaces are valid")
    }

    /// All seven scenarios with default settings.
    pub fn defaults() -> Vec<Self> {
        ScenarioId::ALL.into_iter().map(Self::default_for).collect()
    }

    pub fn with_overrides(&self, overrides: &ScenarioOverrides) -> Result<Self, GameError> {
        let template = match &overrides.prompt_template_path {
            Some(path) => std::fs::read_to_string(path).map_err(|e| GameError::TemplateIo {
                path: path.display().to_string(),
                message: e.to_string(),
            })?,
            None => self.prompt_template.clone(),
        };
        Self::new(
            self.id,
            template,
            overrides.action_min.unwrap_or(self.action_min),
            overrides.action_max.unwrap_or(self.action_max),
            overrides.endowment.or(self.endowment),
        )
    }

    pub fn id(&self) -> ScenarioId {
        self.id
    }

    pub fn prompt_template(&self) -> &str {
        &self.prompt_template
    }

    pub fn action_min(&self) -> i64 {
        self.action_min
    }

    pub fn action_max(&self) -> i64 {
        self.action_max
    }

    pub fn action_unit(&self) -> ActionUnit {
        self.action_unit
    }

    pub fn endowment(&self) -> Option<i64> {
        self.endowment
    }

    fn placeholders(&self) -> BTreeMap<&'static str, String> {
        let mut map = BTreeMap::new();
        map.insert("action_min", self.action_min.to_string());
        map.insert("action_max", self.action_max.to_string());
        if let Some(e) = self.endowment {
            map.insert("endowment", e.to_string());
        }
        map
    }

    /// Render the user prompt for this scenario.
    pub fn render_prompt(&self) -> Result<String, GameError> {
        let text = render_template(&self.prompt_template, &self.placeholders())?;
        if text.trim().is_empty() {
            return Err(GameError::EmptyTemplate);
        }
        Ok(text)
    }
}

/// Substitute `{name}` placeholders. Braces that do not enclose an
/// identifier are copied through unchanged.
pub fn render_template(template: &str, values: &BTreeMap<&'static str, String>) -> Result<String, GameError> {
    let mut out = String::with_capacity(template.len() + 32);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let close = after.find('}');
        let name = close.map(|c| &after[..c]);
        match name {
            Some(name) if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
                let value = values.get(name).ok_or_else(|| GameError::Template {
                    placeholder: name.to_string(),
                })?;
                out.push_str(value);
                rest = &after[name.len() + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    Ok(out)
}

/// A validated action for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionValue {
    scenario: ScenarioId,
    value: i64,
}

impl ActionValue {
    pub fn scenario(&self) -> ScenarioId {
        self.scenario
    }

    pub fn value(&self) -> i64 {
        self.value
    }
}

pub fn validate_action(spec: &GameScenarioSpec, value: i64) -> Result<ActionValue, GameError> {
    if value < spec.action_min || value > spec.action_max {
        return Err(GameError::OutOfRange {
            scenario: spec.id,
            value,
            min: spec.action_min,
            max: spec.action_max,
        });
    }
    Ok(ActionValue {
        scenario: spec.id,
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    HumanLog,
    ModelGenerated,
    EmpiricalAgent,
}

/// The actions observed for one scenario from one source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviorSample {
    scenario: ScenarioId,
    values: Vec<ActionValue>,
    source: SampleSource,
}

impl BehaviorSample {
    pub fn new(scenario: ScenarioId, values: Vec<ActionValue>, source: SampleSource) -> Result<Self, GameError> {
        if let Some(bad) = values.iter().find(|v| v.scenario != scenario) {
            return Err(GameError::MixedScenarios {
                expected: scenario,
                found: bad.scenario,
            });
        }
        Ok(Self {
            scenario,
            values,
            source,
        })
    }

    pub fn scenario(&self) -> ScenarioId {
        self.scenario
    }

    pub fn values(&self) -> &[ActionValue] {
        &self.values
    }

    pub fn source(&self) -> SampleSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_empirical(&self) -> Result<EmpiricalSample, MetricError> {
        EmpiricalSample::new(
            format!("{}:{:?}", self.scenario, self.source),
            self.values.iter().map(|v| v.value as f64).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_round_trip() {
        let mut names: Vec<_> = ScenarioId::ALL.iter().map(|s| s.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 7);
        for id in ScenarioId::ALL {
            assert_eq!(id.as_str().parse::<ScenarioId>().unwrap(), id);
        }
        assert!("prisoners_dilemma".parse::<ScenarioId>().is_err());
    }

    #[test]
    fn every_default_renders() {
        for spec in GameScenarioSpec::defaults() {
            assert!(spec.action_min() <= spec.action_max());
            let text = spec.render_prompt().unwrap();
            assert!(!text.is_empty());
            assert!(!text.contains("{action_"), "{text}");
        }
    }

    #[test]
    fn dictator_prompt_mentions_endowment_and_is_deterministic() {
        let spec = GameScenarioSpec::default_for(ScenarioId::Dictator);
        let a = spec.render_prompt().unwrap();
        assert!(a.contains("$100"));
        assert_eq!(a.as_bytes(), spec.render_prompt().unwrap().as_bytes());
    }

    #[test]
    fn undefined_placeholder_is_named() {
        let spec = GameScenarioSpec::new(ScenarioId::Dictator, "Split {endowment} with {partner_name}.", 0, 100, Some(100))
            .unwrap();
        assert_eq!(
            spec.render_prompt().unwrap_err(),
            GameError::Template {
                placeholder: "partner_name".into()
            }
        );
        // bomb has no endowment, so referencing it is an error too
        let bomb = GameScenarioSpec::new(ScenarioId::Bomb, "Open up to {endowment}", 1, 100, None).unwrap();
        assert!(matches!(bomb.render_prompt(), Err(GameError::Template { .. })));
    }

    #[test]
    fn non_identifier_braces_pass_through() {
        let values = BTreeMap::from([("x", "1".to_string())]);
        assert_eq!(render_template("{ a } {x} {", &values).unwrap(), "{ a } 1 {");
    }

    #[test]
    fn validate_boundaries() {
        let spec = GameScenarioSpec::default_for(ScenarioId::Dictator);
        assert_eq!(validate_action(&spec, 0).unwrap().value(), 0);
        assert_eq!(validate_action(&spec, 100).unwrap().value(), 100);
        assert!(matches!(validate_action(&spec, 101), Err(GameError::OutOfRange { value: 101, .. })));
    }

    #[test]
    fn overrides_apply_and_validate() {
        let base = GameScenarioSpec::default_for(ScenarioId::PublicGoods);
        let o = ScenarioOverrides {
            action_max: Some(50),
            endowment: Some(50),
            ..Default::default()
        };
        let spec = base.with_overrides(&o).unwrap();
        assert_eq!(spec.action_max(), 50);
        assert!(spec.render_prompt().unwrap().contains("$50"));
        let bad = ScenarioOverrides {
            action_min: Some(60),
            ..o
        };
        assert!(matches!(base.with_overrides(&bad), Err(GameError::InvalidActionSpace { .. })));
    }

    #[test]
    fn behavior_sample_rejects_mixed_scenarios() {
        let d = validate_action(&GameScenarioSpec::default_for(ScenarioId::Dictator), 5).unwrap();
        let b = validate_action(&GameScenarioSpec::default_for(ScenarioId::Bomb), 5).unwrap();
        assert!(BehaviorSample::new(ScenarioId::Dictator, vec![d, b], SampleSource::HumanLog).is_err());
    }
}
