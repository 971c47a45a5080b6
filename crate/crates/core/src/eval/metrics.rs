use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::entities::{Entity, EntityLexicon};
use crate::baselines::PipelineKind;
use crate::error::{Error, Result};
use crate::model::{cosine, Embedder, ModelKind, Models};
use crate::prompts::{self, render};
use crate::structuring::{Answer, Kpi, StructuredNetworkIntent};
use crate::text::match_key;

pub const CORRECTNESS_F1_WEIGHT: f64 = 0.75;
pub const REVERSE_QUESTIONS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalSample {
    pub intent: String,
    pub ground_truth: StructuredNetworkIntent,
    /// Retrieved context texts in rank order; `None` when the pipeline retrieves nothing.
    pub contexts: Option<Vec<String>>,
    pub answer: Answer,
    pub pipeline: PipelineKind,
    pub duration_seconds: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricScores {
    pub context_precision: Option<f64>,
    pub context_recall: Option<f64>,
    pub context_entity_recall: Option<f64>,
    pub answer_relevancy: Option<f64>,
    pub answer_correctness: Option<f64>,
    pub faithfulness: Option<f64>,
}

impl MetricScores {
    pub const NAMES: [&'static str; 6] = [
        "context_precision",
        "context_recall",
        "context_entity_recall",
        "answer_relevancy",
        "answer_correctness",
        "faithfulness",
    ];

    pub fn values(&self) -> [Option<f64>; 6] {
        [
            self.context_precision,
            self.context_recall,
            self.context_entity_recall,
            self.answer_relevancy,
            self.answer_correctness,
            self.faithfulness,
        ]
    }
}

/// How answer relevancy is judged.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelevancyMode {
    #[default]
    Embedding,
    ReverseQuestions,
}

fn contexts(sample: &EvalSample) -> Result<&[String]> {
    sample.contexts.as_deref().ok_or(Error::MissingContexts)
}

fn context_entities(lex: &EntityLexicon, ctxs: &[String]) -> BTreeSet<Entity> {
    ctxs.iter().flat_map(|c| lex.extract(c)).collect()
}

/// Share of ground-truth entities found in the retrieved contexts; 1 when the ground truth has none.
pub fn context_entity_recall(sample: &EvalSample, lex: &EntityLexicon) -> Result<f64> {
    let ctxs = contexts(sample)?;
    let gt = lex.extract(&sample.ground_truth.to_canonical());
    if gt.is_empty() {
        return Ok(1.0);
    }
    let found = context_entities(lex, ctxs);
    Ok(gt.intersection(&found).count() as f64 / gt.len() as f64)
}

/// Rank-weighted precision of contexts holding at least one ground-truth entity.
pub fn context_precision(sample: &EvalSample, lex: &EntityLexicon) -> Result<f64> {
    let ctxs = contexts(sample)?;
    let gt = lex.extract(&sample.ground_truth.to_canonical());
    let relevant: Vec<bool> = ctxs.iter().map(|c| !lex.extract(c).is_disjoint(&gt)).collect();
    Ok(rank_weighted_precision(&relevant))
}

pub fn rank_weighted_precision(relevant: &[bool]) -> f64 {
    let mut hits = 0usize;
    let mut total = 0.0;
    for (k, rel) in relevant.iter().enumerate() {
        if *rel {
            hits += 1;
            total += hits as f64 / (k + 1) as f64;
        }
    }
    total / hits.max(1) as f64
}

/// Share of ground-truth KPI statements whose entities all occur in the contexts.
pub fn context_recall(sample: &EvalSample, lex: &EntityLexicon) -> Result<f64> {
    let ctxs = contexts(sample)?;
    if ctxs.is_empty() {
        return Ok(0.0);
    }
    let kpis = &sample.ground_truth.kpis;
    if kpis.is_empty() {
        return Ok(1.0);
    }
    let found = context_entities(lex, ctxs);
    let recalled = kpis.iter().filter(|k| lex.extract(&k.item_text()).is_subset(&found)).count();
    Ok(recalled as f64 / kpis.len() as f64)
}

/// Share of answer claims whose value entities occur in the contexts.
pub fn faithfulness(sample: &EvalSample, lex: &EntityLexicon) -> Result<f64> {
    let ctxs = contexts(sample)?;
    let found = context_entities(lex, ctxs);
    let claims: Vec<BTreeSet<Entity>> = match &sample.answer {
        Answer::Structured(s) => s
            .kpis
            .iter()
            .map(|k| lex.extract(&k.value_text()).into_iter().filter(Entity::is_value).collect())
            .collect(),
        Answer::FreeText(f) => lex
            .extract(&f.text)
            .into_iter()
            .filter(Entity::is_value)
            .map(|e| BTreeSet::from([e]))
            .collect(),
    };
    if claims.is_empty() {
        return Err(Error::NoClaims);
    }
    let supported = claims.iter().filter(|c| !c.is_empty() && c.is_subset(&found)).count();
    Ok(supported as f64 / claims.len() as f64)
}

fn clamped_cosine(embedder: &dyn Embedder, a: &str, b: &str) -> Result<f64> {
    let va = embedder.embed_one(a)?;
    let vb = embedder.embed_one(b)?;
    Ok(cosine(&va, &vb).clamp(0.0, 1.0))
}

pub fn answer_relevancy(sample: &EvalSample, models: &Models, mode: RelevancyMode) -> Result<f64> {
    let answer = sample.answer.text();
    match mode {
        RelevancyMode::Embedding => clamped_cosine(models.embedder.as_ref(), &sample.intent, &answer),
        RelevancyMode::ReverseQuestions => {
            let mut scores = Vec::with_capacity(REVERSE_QUESTIONS);
            for n in 1..=REVERSE_QUESTIONS {
                let prompt = render(prompts::REVERSE_QUESTION, &[("n", &n.to_string()), ("answer", &answer)]);
                let question = models.ask(ModelKind::Instruction, prompt)?;
                scores.push(clamped_cosine(models.embedder.as_ref(), &sample.intent, &question.text)?);
            }
            Ok(stable_mean(&mut scores).unwrap_or(0.0))
        }
    }
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    if tp == 0 {
        return if fp == 0 && fn_ == 0 { 1.0 } else { 0.0 };
    }
    let p = tp as f64 / (tp + fp) as f64;
    let r = tp as f64 / (tp + fn_) as f64;
    2.0 * p * r / (p + r)
}

fn kpi_f1(answer: &StructuredNetworkIntent, gt: &StructuredNetworkIntent) -> f64 {
    let mut unmatched: Vec<&Kpi> = gt.kpis.iter().collect();
    let mut tp = 0;
    for kpi in &answer.kpis {
        if let Some(pos) = unmatched.iter().position(|g| *g == kpi) {
            unmatched.remove(pos);
            tp += 1;
        }
    }
    let mut fp = answer.kpis.len() - tp;
    let mut fn_ = unmatched.len();
    if match_key(&answer.scenario_type) == match_key(&gt.scenario_type) {
        tp += 1;
    } else {
        fp += 1;
        fn_ += 1;
    }
    f1(tp, fp, fn_)
}

/// `0.75 * F1 + 0.25 * cosine` against the ground truth.
///
/// Structured answers are matched KPI by KPI with the scenario type as one more item;
/// free text falls back to entity sets.
pub fn answer_correctness(sample: &EvalSample, lex: &EntityLexicon, embedder: &dyn Embedder) -> Result<f64> {
    let gt = &sample.ground_truth;
    let gt_text = gt.to_canonical();
    let f1 = match &sample.answer {
        Answer::Structured(s) => kpi_f1(s, gt),
        Answer::FreeText(f) => {
            let answer = lex.extract(&f.text);
            let truth = lex.extract(&gt_text);
            let tp = answer.intersection(&truth).count();
            f1(tp, answer.len() - tp, truth.len() - tp)
        }
    };
    let cos = clamped_cosine(embedder, &sample.answer.text(), &gt_text)?;
    Ok(CORRECTNESS_F1_WEIGHT * f1 + (1.0 - CORRECTNESS_F1_WEIGHT) * cos)
}

/// Mean summed in sorted order, so it does not depend on sample order.
pub fn stable_mean(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    Some(values.iter().sum::<f64>() / values.len() as f64)
}

/// All applicable metrics; inapplicable or undefined ones are `None` and noted.
pub fn score_sample(
    sample: &EvalSample,
    lex: &EntityLexicon,
    models: &Models,
    relevancy: RelevancyMode,
) -> Result<(MetricScores, Vec<String>)> {
    let mut notes = Vec::new();
    let mut optional = |r: Result<f64>, name: &str| match r {
        Ok(v) => Some(v),
        Err(Error::MissingContexts) => None,
        Err(e) => {
            notes.push(format!("{name}: {e}"));
            None
        }
    };
    let scores = MetricScores {
        context_precision: optional(context_precision(sample, lex), "context_precision"),
        context_recall: optional(context_recall(sample, lex), "context_recall"),
        context_entity_recall: optional(context_entity_recall(sample, lex), "context_entity_recall"),
        faithfulness: optional(faithfulness(sample, lex), "faithfulness"),
        answer_relevancy: Some(answer_relevancy(sample, models, relevancy)?),
        answer_correctness: Some(answer_correctness(sample, lex, models.embedder.as_ref())?),
    };
    if sample.contexts.is_some() && lex.extract(&sample.ground_truth.to_canonical()).is_empty() {
        notes.push("context_entity_recall: ground truth has no entities, scored as 1".into());
    }
    Ok((scores, notes))
}
