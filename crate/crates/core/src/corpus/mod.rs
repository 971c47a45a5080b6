//! Knowledge database: document loading, modality separation, chunking,
//! summarization, embedding and the exact cosine vector index.

mod index;
mod knowledge;
mod loader;
mod persist;
mod splitter;
mod summarize;

use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use index::{EmbeddedNode, IndexInput, Payload, ScoredNode, VectorIndex};
pub use knowledge::{ingest_documents, read_manifest, IngestReport, KnowledgeBase, ManifestEntry};
pub use loader::load_document;
pub use persist::{decode_index, encode_index, load_index, persist_index, INDEX_MAGIC};
pub use splitter::{split_text, DEFAULT_MAX_TOKENS, DEFAULT_OVERLAP};
pub use summarize::{summarize_chunk, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatHint {
    /// Tab-delimited grids.
    #[default]
    Plain,
    /// Pipe-delimited grids and `![alt](ref)` image lines.
    MarkdownLike,
    /// Blank-line separated blocks are already chunk boundaries.
    PreSegmented,
}

impl std::str::FromStr for FormatHint {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "plain" | "text" => Ok(FormatHint::Plain),
            "markdown-like" | "markdown" | "md" => Ok(FormatHint::MarkdownLike),
            "pre-segmented" | "presegmented" => Ok(FormatHint::PreSegmented),
            other => Err(crate::Error::InvalidInput(format!("unknown format hint {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub id: String,
    #[serde(default)]
    pub source_uri: String,
    pub text: String,
    #[serde(default)]
    pub format_hint: FormatHint,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>, format_hint: FormatHint) -> Self {
        let id = id.into();
        Self { source_uri: id.clone(), id, text: text.into(), format_hint }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    Text,
    Table,
    Image,
}

impl Modality {
    pub fn as_str(self) -> &'static str {
        match self {
            Modality::Text => "text",
            Modality::Table => "table",
            Modality::Image => "image",
        }
    }
}

/// A contiguous region of a document with one modality.
///
/// `byte_range` is the region's span in the source text; the spans of one
/// document tile it exactly. `content` is the region trimmed, with table rows
/// re-serialized as `cell | cell` lines and images kept as their reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModalityChunk {
    pub id: String,
    pub doc_id: String,
    pub modality: Modality,
    pub content: String,
    pub order_index: usize,
    pub byte_range: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextNode {
    pub id: String,
    pub parent_chunk_id: String,
    pub text: String,
    pub token_start: usize,
    pub token_end: usize,
}
