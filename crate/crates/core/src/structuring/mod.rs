//! Structured-intent generation: retrieve, rerank, prompt, parse and validate.

mod kpi;
mod parse;
mod prompt;
mod retrieval;
mod validate;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use kpi::{Comparator, Kpi, KpiValue, Metric, StructuredNetworkIntent, Unit};
pub use parse::parse_structured_intent;
pub(crate) use parse::{clean as clean_model_text, shifted};
pub use prompt::{assemble_generation_prompt, assemble_norag_prompt, render_contexts};
pub use retrieval::{lexical_score, rerank, retrieve, Reranker, RetrievedContext};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

use crate::baselines::PipelineKind;
use crate::corpus::VectorIndex;
use crate::error::{Error, Result};
use crate::model::{ModelKind, Models};
use crate::refinement::{refine, IntentText, ScenarioCatalog};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub retrieve_k: usize,
    pub rerank_top: usize,
    pub catalog_k: usize,
    pub reranker: Reranker,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { retrieve_k: 6, rerank_top: 3, catalog_k: 16, reranker: Reranker::Lexical }
    }
}

impl PipelineConfig {
    pub fn check(&self) -> Result<()> {
        if self.rerank_top == 0 || self.rerank_top > self.retrieve_k {
            return Err(Error::BadParams(format!(
                "need 1 <= rerank_top <= retrieve_k, got rerank_top={} retrieve_k={}",
                self.rerank_top, self.retrieve_k
            )));
        }
        if self.catalog_k == 0 {
            return Err(Error::BadParams("catalog_k must be at least 1".into()));
        }
        Ok(())
    }
}

/// Model output that did not parse as a structured intent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeTextAnswer {
    pub text: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Structured(StructuredNetworkIntent),
    FreeText(FreeTextAnswer),
}

impl Answer {
    pub fn structured(&self) -> Option<&StructuredNetworkIntent> {
        match self {
            Answer::Structured(s) => Some(s),
            Answer::FreeText(_) => None,
        }
    }

    /// Text that metrics compare against: canonical form or the raw reply.
    pub fn text(&self) -> String {
        match self {
            Answer::Structured(s) => s.to_canonical(),
            Answer::FreeText(f) => f.text.clone(),
        }
    }
}

/// What to do when the generated reply does not parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnParseFailure {
    Fail,
    FreeText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    pub pipeline: PipelineKind,
    pub intent: String,
    pub well_defined: Option<String>,
    pub contexts: Vec<RetrievedContext>,
    pub answer: Answer,
    pub report: ValidationReport,
    pub duration_seconds: f64,
}

impl Translation {
    /// Response body without timing, so identical inputs give identical bytes.
    pub fn to_json(&self) -> Value {
        let body = match &self.answer {
            Answer::Structured(s) => json!({"structured": intent_json(s, &self.report)}),
            Answer::FreeText(f) => json!({"free_text": {"text": f.text, "reason": f.reason}}),
        };
        let mut v = json!({
            "pipeline": self.pipeline,
            "intent": self.intent,
            "well_defined_intent": self.well_defined,
            "contexts": self.contexts,
        });
        v.as_object_mut().unwrap().extend(body.as_object().unwrap().clone());
        v
    }
}

/// `{scenario_type, kpis, provenance, violations}`.
pub fn intent_json(sni: &StructuredNetworkIntent, report: &ValidationReport) -> Value {
    json!({
        "scenario_type": sni.scenario_type,
        "kpis": sni.kpis,
        "provenance": sni.provenance,
        "violations": report.violations,
    })
}

/// A prepared generation step, before the model is called.
pub(crate) struct Draft<'a> {
    pub pipeline: PipelineKind,
    pub intent: &'a IntentText,
    pub well_defined: Option<String>,
    pub contexts: Vec<RetrievedContext>,
    pub prompt: String,
    pub started: Instant,
}

/// Sends the draft's prompt to the instruction profile and parses the reply.
pub(crate) fn generate(draft: Draft<'_>, models: &Models, on_failure: OnParseFailure) -> Result<Translation> {
    let Draft { pipeline, intent, well_defined, contexts, prompt, started } = draft;
    let reply = models.ask(ModelKind::Instruction, prompt)?;
    let (answer, report) = match parse_structured_intent(&reply.text) {
        Ok(mut sni) => {
            sni.provenance = contexts.iter().map(|c| c.node_id.clone()).collect();
            let report = validate(&sni);
            (Answer::Structured(sni), report)
        }
        Err(err) => match on_failure {
            OnParseFailure::Fail => return Err(err),
            OnParseFailure::FreeText => (
                Answer::FreeText(FreeTextAnswer { text: reply.text, reason: err.to_string() }),
                ValidationReport::default(),
            ),
        },
    };
    Ok(Translation {
        pipeline,
        intent: intent.as_str().to_string(),
        well_defined,
        contexts,
        answer,
        report,
        duration_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Full intent-RAG translation: refine, retrieve, rerank, generate, parse, validate.
pub fn translate(
    intent: &IntentText,
    index: &VectorIndex,
    catalog: &ScenarioCatalog,
    models: &Models,
    config: &PipelineConfig,
) -> Result<Translation> {
    translate_with(intent, index, catalog, models, config, OnParseFailure::Fail)
}

pub fn translate_with(
    intent: &IntentText,
    index: &VectorIndex,
    catalog: &ScenarioCatalog,
    models: &Models,
    config: &PipelineConfig,
    on_failure: OnParseFailure,
) -> Result<Translation> {
    let started = Instant::now();
    config.check()?;
    if index.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let wdi = refine(intent, catalog, models)?;
    let retrieved = retrieve(&wdi.scenario_type, index, models.embedder.as_ref(), config.retrieve_k)?;
    let contexts = rerank(&retrieved, &wdi.scenario_type, config.rerank_top, config.reranker, models)?;
    let prompt = assemble_generation_prompt(&contexts, &wdi.scenario_type);
    let draft = Draft {
        pipeline: PipelineKind::IntentRag,
        intent,
        well_defined: Some(wdi.scenario_type),
        contexts,
        prompt,
        started,
    };
    generate(draft, models, on_failure)
}
