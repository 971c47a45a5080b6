use std::fs;
use std::path::Path;
use std::sync::{Arc, Mutex};

use crate::baselines::{norag_translate, vanilla_inputs, vanilla_translate_with, PipelineKind};

use crate::corpus::{ingest_documents, load_index, persist_index, IngestReport, KnowledgeBase, RawDocument, VectorIndex};
use crate::error::Result;
use crate::eval::{run_eval, EvalItem, EvalReport, Translator};
use crate::model::Models;
use crate::refinement::{build_catalog, DomainInstruction, IntentText, ScenarioCatalog};
use crate::structuring::{translate_with, OnParseFailure, Translation};

use super::{models_for as config_models, GatewayConfig};

/// Shared state behind the CLI and the HTTP service: both knowledge bases,
/// the models, and the scenario catalog cached per index version.
pub struct TranslationEngine {
    config: GatewayConfig,
    models: Models,
    instruction: DomainInstruction,
    intent_kb: KnowledgeBase,
    vanilla_kb: KnowledgeBase,
    catalog: Mutex<Option<(u64, Arc<ScenarioCatalog>)>>,
}

impl std::fmt::Debug for TranslationEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TranslationEngine").field("config", &self.config).finish_non_exhaustive()
    }
}

impl TranslationEngine {
    /// Engine with empty indices.
    pub fn new(config: GatewayConfig, models: Models) -> Result<Self> {
        config.check()?;
        let dim = models.embedder.dimension();
        Self::with_indices(config, models, VectorIndex::new(dim), VectorIndex::new(dim))
    }

    pub fn with_indices(config: GatewayConfig, models: Models, intent: VectorIndex, vanilla: VectorIndex) -> Result<Self> {
        config.check()?;
        let instruction = DomainInstruction::new(config.domain_instruction.clone())?;
        Ok(Self {
            config,
            models,
            instruction,
            intent_kb: KnowledgeBase::new(intent),
            vanilla_kb: KnowledgeBase::new(vanilla),
            catalog: Mutex::new(None),
        })
    }

    /// Models chosen by the config's backend.
    pub fn from_config(config: GatewayConfig) -> Result<Self> {
        let models = config_models(&config)?;
        Self::new(config, models)
    }

    /// Loads both indices from `config.index_dir`.
    pub fn open(config: GatewayConfig) -> Result<Self> {
        let models = config_models(&config)?;
        Self::open_with(config, models)
    }

    pub fn open_with(config: GatewayConfig, models: Models) -> Result<Self> {
        let intent = load_index(&config.intent_index_path())?;
        let vanilla = load_index(&config.vanilla_index_path())?;
        Self::with_indices(config, models, intent, vanilla)
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.config
    }

    pub fn models(&self) -> &Models {
        &self.models
    }

    pub fn intent_index(&self) -> Arc<VectorIndex> {
        self.intent_kb.snapshot()
    }

    pub fn vanilla_index(&self) -> Arc<VectorIndex> {
        self.vanilla_kb.snapshot()
    }

    /// Adds or replaces `docs` in both knowledge bases.
    pub fn ingest(&self, docs: &[RawDocument]) -> Result<IngestReport> {
        let c = &self.config;
        let vanilla = vanilla_inputs(docs, c.vanilla.window)?;
        let report = self.intent_kb.update(|idx| {
            ingest_documents(docs, &self.models, c.chunking.max_tokens, c.chunking.overlap, idx)
        })?;
        self.vanilla_kb.update(|idx| {
            for doc in docs {
                idx.remove_doc(&doc.id);
            }
            idx.embed_and_index(vanilla, self.models.embedder.as_ref())
        })?;
        Ok(report)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        persist_index(&self.intent_index(), &dir.join("intent.idx"))?;
        persist_index(&self.vanilla_index(), &dir.join("vanilla.idx"))?;
        Ok(())
    }

    /// Scenario catalog for the current intent index, rebuilt after ingestion.
    pub fn catalog(&self) -> Result<Arc<ScenarioCatalog>> {
        let index = self.intent_index();
        if let Some((version, cat)) = &*self.catalog.lock().unwrap_or_else(|e| e.into_inner()) {
            if *version == index.version() {
                return Ok(cat.clone());
            }
        }
        let cat = Arc::new(build_catalog(&index, &self.instruction, &self.models, self.config.pipeline.catalog_k)?);
        *self.catalog.lock().unwrap_or_else(|e| e.into_inner()) = Some((index.version(), cat.clone()));
        Ok(cat)
    }

    pub fn translate(&self, pipeline: PipelineKind, intent: &IntentText) -> Result<Translation> {
        self.translate_with(pipeline, intent, OnParseFailure::Fail)
    }

    pub fn translate_with(&self, pipeline: PipelineKind, intent: &IntentText, on_failure: OnParseFailure) -> Result<Translation> {
        match pipeline {
            PipelineKind::IntentRag => {
                let index = self.intent_index();
                if index.is_empty() {
                    return Err(crate::Error::EmptyIndex);
                }
                let catalog = self.catalog()?;
                translate_with(intent, &index, &catalog, &self.models, &self.config.pipeline, on_failure)
            }
            PipelineKind::VanillaRag => {
                vanilla_translate_with(intent, &self.vanilla_index(), &self.models, self.config.vanilla.top_k, on_failure)
            }
            PipelineKind::NoRag => norag_translate(intent, &self.models),
        }
    }

    pub fn evaluate(&self, dataset: &[EvalItem], pipelines: &[PipelineKind]) -> Result<EvalReport> {
        run_eval(dataset, pipelines, self, &self.models, self.config.eval)
    }
}

/// Evaluation keeps unparseable replies as free text so they are still scored.
impl Translator for TranslationEngine {
    fn translate(&self, pipeline: PipelineKind, intent: &IntentText) -> Result<Translation> {
        self.translate_with(pipeline, intent, OnParseFailure::FreeText)
    }

    fn scenario_names(&self) -> Vec<String> {
        self.catalog().map(|c| c.names().to_vec()).unwrap_or_default()
    }
}
