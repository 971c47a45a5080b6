//! Evaluation harness: six RAG metrics over a dataset of intents with
//! ground-truth structured intents, aggregated per pipeline.

mod entities;
mod metrics;
mod report;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use entities::{extract_entities, Entity, EntityKind, EntityLexicon};
pub use metrics::{
    answer_correctness, answer_relevancy, context_entity_recall, context_precision, context_recall, faithfulness,
    rank_weighted_precision, score_sample, stable_mean, EvalSample, MetricScores, RelevancyMode,
    CORRECTNESS_F1_WEIGHT, REVERSE_QUESTIONS,
};
pub use report::{EvalReport, PipelineSummary, SampleResult};

use crate::baselines::PipelineKind;
use crate::error::{Error, Result};
use crate::model::Models;
use crate::refinement::IntentText;
use crate::structuring::{parse_structured_intent, validate, Answer, StructuredNetworkIntent, Translation};

/// Something that can run any pipeline on an intent.
pub trait Translator: Sync {
    fn translate(&self, pipeline: PipelineKind, intent: &IntentText) -> Result<Translation>;

    /// Scenario names known to the knowledge base, for entity extraction.
    fn scenario_names(&self) -> Vec<String> {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub intent: String,
    pub ground_truth: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalItem {
    pub intent: String,
    pub ground_truth: StructuredNetworkIntent,
}

impl EvalItem {
    pub fn from_record(record: &DatasetRecord) -> Result<Self> {
        IntentText::new(record.intent.as_str())?;
        let mut gt = parse_structured_intent(&record.ground_truth)?;
        let report = validate(&gt);
        if !report.is_valid() {
            return Err(Error::InvalidInput(format!(
                "ground truth for {:?} is invalid: {}",
                record.intent, report.violations[0].message
            )));
        }
        gt.raw_model_output.clear();
        Ok(Self { intent: record.intent.clone(), ground_truth: gt })
    }
}

/// One JSON record per line: `{"intent": ..., "ground_truth": ...}`. Blank lines are skipped.
pub fn parse_dataset(text: &str) -> Result<Vec<EvalItem>> {
    let mut items = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: DatasetRecord = serde_json::from_str(line)
            .map_err(|e| Error::InvalidInput(format!("dataset line {}: {e}", n + 1)))?;
        items.push(
            EvalItem::from_record(&record)
                .map_err(|e| Error::InvalidInput(format!("dataset line {}: {e}", n + 1)))?,
        );
    }
    if items.is_empty() {
        return Err(Error::InvalidInput("dataset is empty".into()));
    }
    Ok(items)
}

pub fn load_dataset(path: &Path) -> Result<Vec<EvalItem>> {
    parse_dataset(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub relevancy: RelevancyMode,
}

/// Runs every pipeline over every item. Per-sample errors are recorded, not raised.
pub fn run_eval(
    dataset: &[EvalItem],
    pipelines: &[PipelineKind],
    translator: &dyn Translator,
    models: &Models,
    options: EvalOptions,
) -> Result<EvalReport> {
    if dataset.is_empty() {
        return Err(Error::InvalidInput("dataset is empty".into()));
    }
    if pipelines.is_empty() {
        return Err(Error::InvalidInput("no pipelines selected".into()));
    }
    let mut names = translator.scenario_names();
    names.extend(dataset.iter().map(|i| i.ground_truth.scenario_type.clone()));
    let lexicon = EntityLexicon::new(names);

    let mut samples = Vec::new();
    for &pipeline in pipelines {
        for (i, item) in dataset.iter().enumerate() {
            samples.push(run_one(i, item, pipeline, translator, &lexicon, models, options));
        }
    }
    Ok(EvalReport::from_samples(pipelines, samples))
}

fn run_one(
    index: usize,
    item: &EvalItem,
    pipeline: PipelineKind,
    translator: &dyn Translator,
    lexicon: &EntityLexicon,
    models: &Models,
    options: EvalOptions,
) -> SampleResult {
    let started = Instant::now();
    let mut result = SampleResult::new(pipeline, index, &item.intent);
    let outcome = IntentText::new(item.intent.as_str()).and_then(|intent| translator.translate(pipeline, &intent));
    let translation = match outcome {
        Ok(t) => t,
        Err(e) => {
            result.duration_seconds = started.elapsed().as_secs_f64();
            result.error = Some(format!("{}: {e}", e.code()));
            return result;
        }
    };
    result.duration_seconds = translation.duration_seconds;
    if let Answer::FreeText(f) = &translation.answer {
        result.notes.push(format!("free text answer: {}", f.reason));
    }
    let sample = EvalSample {
        intent: item.intent.clone(),
        ground_truth: item.ground_truth.clone(),
        contexts: pipeline.uses_retrieval().then(|| translation.contexts.iter().map(|c| c.text.clone()).collect()),
        answer: translation.answer.clone(),
        pipeline,
        duration_seconds: translation.duration_seconds,
    };
    result.answer = Some(sample.answer.text());
    match score_sample(&sample, lexicon, models, options.relevancy) {
        Ok((scores, notes)) => {
            result.scores = Some(scores);
            result.notes.extend(notes);
        }
        Err(e) => result.error = Some(format!("{}: {e}", e.code())),
    }
    result
}
