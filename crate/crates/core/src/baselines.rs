//! Comparison pipelines: sentence-window RAG without refinement or reranking,
//! and generation with no retrieval at all. Both share the intent-RAG
//! generation prompt and parser.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::corpus::{IndexInput, Modality, RawDocument, VectorIndex};
use crate::error::{Error, Result};
use crate::model::{Embedder, Models};
use crate::refinement::IntentText;
use crate::structuring::{
    assemble_generation_prompt, assemble_norag_prompt, generate, Draft, retrieve, OnParseFailure, Translation,
};
use crate::text::sentence_spans;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineKind {
    IntentRag,
    VanillaRag,
    NoRag,
}

impl PipelineKind {
    pub const ALL: [PipelineKind; 3] = [PipelineKind::VanillaRag, PipelineKind::IntentRag, PipelineKind::NoRag];

    pub fn as_str(self) -> &'static str {
        match self {
            PipelineKind::IntentRag => "intent_rag",
            PipelineKind::VanillaRag => "vanilla_rag",
            PipelineKind::NoRag => "no_rag",
        }
    }

    pub fn uses_retrieval(self) -> bool {
        self != PipelineKind::NoRag
    }
}

impl fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PipelineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intent_rag" => Ok(PipelineKind::IntentRag),
            "vanilla_rag" => Ok(PipelineKind::VanillaRag),
            "no_rag" => Ok(PipelineKind::NoRag),
            other => Err(Error::InvalidInput(format!("unknown pipeline {other:?}"))),
        }
    }
}

pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_VANILLA_TOP_K: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowNode {
    pub id: String,
    pub center_sentence: String,
    pub window_text: String,
    pub doc_id: String,
    pub sentence_index: usize,
}

/// One node per sentence; the window spans `window` sentences on each side,
/// clipped at the document bounds, copied verbatim from the source.
pub fn vanilla_nodes(doc: &RawDocument, window: usize) -> Result<Vec<WindowNode>> {
    let spans = sentence_spans(&doc.text);
    if spans.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(spans
        .iter()
        .enumerate()
        .map(|(i, span)| {
            let first = i.saturating_sub(window);
            let last = (i + window).min(spans.len() - 1);
            WindowNode {
                id: format!("{}#s{i}", doc.id),
                center_sentence: doc.text[span.clone()].to_string(),
                window_text: doc.text[spans[first].start..spans[last].end].to_string(),
                doc_id: doc.id.clone(),
                sentence_index: i,
            }
        })
        .collect())
}

/// Index inputs for the sentence-window index: center sentences are embedded, windows are stored.
pub fn vanilla_inputs(docs: &[RawDocument], window: usize) -> Result<Vec<IndexInput>> {
    if docs.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let mut inputs = Vec::new();
    for doc in docs {
        for node in vanilla_nodes(doc, window)? {
            inputs.push(IndexInput {
                node_id: node.id,
                original_text: node.window_text,
                summary_text: Some(node.center_sentence),
                modality: Modality::Text,
                doc_id: node.doc_id,
            });
        }
    }
    Ok(inputs)
}

pub fn vanilla_ingest(docs: &[RawDocument], embedder: &dyn Embedder, window: usize) -> Result<VectorIndex> {
    let inputs = vanilla_inputs(docs, window)?;
    let mut index = VectorIndex::new(embedder.dimension());
    index.embed_and_index(inputs, embedder)?;
    Ok(index)
}

/// Retrieves on the raw intent and generates with the shared prompt.
pub fn vanilla_translate(intent: &IntentText, index: &VectorIndex, models: &Models, top_k: usize) -> Result<Translation> {
    vanilla_translate_with(intent, index, models, top_k, OnParseFailure::Fail)
}

pub fn vanilla_translate_with(
    intent: &IntentText,
    index: &VectorIndex,
    models: &Models,
    top_k: usize,
    on_failure: OnParseFailure,
) -> Result<Translation> {
    let started = Instant::now();
    if index.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let contexts = retrieve(intent.as_str(), index, models.embedder.as_ref(), top_k)?;
    let prompt = assemble_generation_prompt(&contexts, intent.as_str());
    let draft = Draft { pipeline: PipelineKind::VanillaRag, intent, well_defined: None, contexts, prompt, started };
    generate(draft, models, on_failure)
}

/// Generation with no context; unparseable replies are kept as free text.
pub fn norag_translate(intent: &IntentText, models: &Models) -> Result<Translation> {
    let started = Instant::now();
    let prompt = assemble_norag_prompt(intent.as_str());
    let draft = Draft { pipeline: PipelineKind::NoRag, intent, well_defined: None, contexts: Vec::new(), prompt, started };
    generate(draft, models, OnParseFailure::FreeText)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::FormatHint;
    use crate::structuring::Answer;

    fn doc(n: usize) -> RawDocument {
        let text: Vec<String> = (1..=n).map(|i| format!("Sentence {i}.")).collect();
        RawDocument::new("d", text.join(" "), FormatHint::Plain)
    }

    #[test]
    fn single_sentence_window() {
        let nodes = vanilla_nodes(&doc(1), 3).unwrap();
        assert_eq!(nodes.len(), 1);
        assert_eq!(nodes[0].window_text, "Sentence 1.");
    }

    #[test]
    fn seven_sentence_windows() {
        let nodes = vanilla_nodes(&doc(7), 3).unwrap();
        assert_eq!(nodes[3].window_text, doc(7).text);
        assert_eq!(nodes[0].window_text, "Sentence 1. Sentence 2. Sentence 3. Sentence 4.");
        assert_eq!(nodes[6].window_text, "Sentence 4. Sentence 5. Sentence 6. Sentence 7.");
        assert_eq!(nodes[3].id, "d#s3");
    }

    #[test]
    fn blank_document_is_rejected() {
        let blank = RawDocument::new("b", "   ", FormatHint::Plain);
        assert!(matches!(vanilla_nodes(&blank, 3), Err(Error::EmptyDocument)));
        assert!(matches!(vanilla_ingest(&[], &crate::model::TrigramEmbedder::default(), 3), Err(Error::EmptyDocument)));
    }

    #[test]
    fn empty_index_is_an_error() {
        let models = Models::mock();
        let intent = IntentText::new("4K On Demand Video").unwrap();
        let index = VectorIndex::new(256);
        assert!(matches!(vanilla_translate(&intent, &index, &models, 3), Err(Error::EmptyIndex)));
    }

    #[test]
    fn norag_on_mock_degrades_to_free_text() {
        let models = Models::mock();
        let intent = IntentText::new("I want to play a virtual reality game without feeling motion sickness").unwrap();
        let t = norag_translate(&intent, &models).unwrap();
        assert!(t.contexts.is_empty());
        match t.answer {
            Answer::FreeText(f) => assert_eq!(f.text, "Scenario Type: UNKNOWN"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pipeline_names_round_trip() {
        for p in PipelineKind::ALL {
            assert_eq!(p.as_str().parse::<PipelineKind>().unwrap(), p);
            assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{p}\""));
        }
    }
}
