//! Prompt texts shared by the training-data emitters and the benchmark
//! tasks. Templates live under `templates/` and are compiled in.

use std::collections::BTreeMap;

use super::bigfive::{Demographics, Dimension, PersonalityScores};
use super::ieo::ContestQuestion;
use super::workflow::WorkflowRecord;
use crate::games::{render_template, GameError};

fn tpl(raw: &'static str) -> &'static str {
    raw.strip_suffix('\n').unwrap_or(raw)
}

pub const BIGFIVE_TRAITS_INSTRUCTION: &str = include_str!("../../templates/alpaca/bigfive_traits_instruction.txt");
pub const BIGFIVE_TRAITS_INPUT: &str = include_str!("../../templates/alpaca/bigfive_traits_input.txt");
pub const DEMOGRAPHICS_INSTRUCTION: &str = include_str!("../../templates/alpaca/demographics_instruction.txt");
pub const DEMOGRAPHICS_INPUT: &str = include_str!("../../templates/alpaca/demographics_input.txt");
pub const DEMOGRAPHICS_GENDER_FORMAT: &str = include_str!("../../templates/alpaca/demographics_gender_format.txt");
/// Age-target output format. Not a verbatim training template: only the
/// gender wording of this section was published.
pub const DEMOGRAPHICS_AGE_FORMAT: &str = include_str!("../../templates/alpaca/demographics_age_format.txt");
pub const WORKFLOW_INSTRUCTION: &str = include_str!("../../templates/alpaca/workflow_instruction.txt");
pub const IDEA_GENERATION_INPUT: &str = include_str!("../../templates/alpaca/idea_generation_input.txt");
pub const TITLE_PREDICTION_INPUT: &str = include_str!("../../templates/alpaca/title_prediction_input.txt");
pub const IEO_SYSTEM: &str = include_str!("../../templates/eval/ieo_system.txt");
pub const IEO_USER: &str = include_str!("../../templates/eval/ieo_user.txt");
pub const CONTEXT_INFERENCE: &str = include_str!("../../templates/eval/context_inference.txt");

fn render(template: &'static str, values: BTreeMap<&'static str, String>) -> String {
    // every template above is static and its placeholders are covered by
    // the callers below; the unit tests render each one
    render_template(tpl(template), &values).unwrap_or_else(|e: GameError| panic!("static template: {e}"))
}

/// Which demographic attribute the demographics prompt asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemographicTarget {
    Gender,
    Age,
}

pub fn bigfive_traits_instruction(demographics: &Demographics) -> String {
    render(
        BIGFIVE_TRAITS_INSTRUCTION,
        BTreeMap::from([("demographics", demographics.describe())]),
    )
}

pub fn bigfive_traits_input(dimension: Dimension) -> String {
    render(
        BIGFIVE_TRAITS_INPUT,
        BTreeMap::from([("personality_dimension", dimension.name().to_string())]),
    )
}

pub fn demographics_instruction() -> String {
    tpl(DEMOGRAPHICS_INSTRUCTION).to_string()
}

pub fn demographics_input(scores: &PersonalityScores, target: DemographicTarget) -> String {
    let format = match target {
        DemographicTarget::Gender => tpl(DEMOGRAPHICS_GENDER_FORMAT),
        DemographicTarget::Age => tpl(DEMOGRAPHICS_AGE_FORMAT),
    };
    render(
        DEMOGRAPHICS_INPUT,
        BTreeMap::from([
            ("openness_score", scores.get(Dimension::Openness).to_string()),
            ("conscientiousness_score", scores.get(Dimension::Conscientiousness).to_string()),
            ("extroversion_score", scores.get(Dimension::Extroversion).to_string()),
            ("agreeableness_score", scores.get(Dimension::Agreeableness).to_string()),
            ("neuroticism_score", scores.get(Dimension::Neuroticism).to_string()),
            ("output_format", format.to_string()),
        ]),
    )
}

pub fn workflow_instruction() -> String {
    tpl(WORKFLOW_INSTRUCTION).to_string()
}

pub fn idea_generation_input(record: &WorkflowRecord) -> String {
    render(
        IDEA_GENERATION_INPUT,
        BTreeMap::from([("context", record.context.clone())]),
    )
}

pub fn title_prediction_input(record: &WorkflowRecord) -> String {
    render(
        TITLE_PREDICTION_INPUT,
        BTreeMap::from([
            ("context", record.context.clone()),
            ("key_idea", record.key_idea.clone()),
            ("method", record.method.clone()),
            ("outcome", record.outcome.clone()),
            ("future_impact", record.projected_impact.clone()),
        ]),
    )
}

pub fn ieo_system_prompt() -> String {
    tpl(IEO_SYSTEM).to_string()
}

pub fn ieo_user_prompt(question: &ContestQuestion) -> String {
    let [a, b, c, d] = question.choices.clone();
    render(
        IEO_USER,
        BTreeMap::from([
            ("topic", question.topic.clone()),
            ("question", question.stem.clone()),
            ("choice_a", a),
            ("choice_b", b),
            ("choice_c", c),
            ("choice_d", d),
        ]),
    )
}

/// `direction` is the observed change in sharing: "increased" or "decreased".
pub fn context_inference_prompt(direction: &str) -> String {
    render(CONTEXT_INFERENCE, BTreeMap::from([("direction", direction.to_string())]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_have_no_trailing_newline_after_trim() {
        for t in [BIGFIVE_TRAITS_INPUT, WORKFLOW_INSTRUCTION, IEO_USER, CONTEXT_INFERENCE] {
            assert!(!tpl(t).ends_with('\n'));
        }
    }

    #[test]
    fn bigfive_input_names_dimension() {
        let text = bigfive_traits_input(Dimension::Agreeableness);
        assert!(text.starts_with("Based on this person's demographics, rate their agreeableness on a scale of [10] to [50]."));
        assert!(text.ends_with("The response should only be a number from 10 to 50 in square brackets."));
    }

    #[test]
    fn context_prompt_substitutes_direction() {
        let up = context_inference_prompt("increased");
        assert!(up.contains("the proportion of money to share -- increased compared to the standard game design"));
        assert!(!up.contains('{'));
    }

    #[test]
    fn user_text_is_not_rescanned() {
        let record = WorkflowRecord {
            paper_id: "p".into(),
            title: "t".into(),
            context: "uses {braces} literally".into(),
            key_idea: "k".into(),
            method: "m".into(),
            outcome: "o".into(),
            projected_impact: "i".into(),
            split: None,
        };
        assert!(idea_generation_input(&record).contains("{braces}"));
    }
}
