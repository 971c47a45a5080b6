use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::summarize::summarize_content;
use super::{load_document, split_text, FormatHint, IndexInput, Modality, RawDocument, VectorIndex};
use crate::model::Models;
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub documents: usize,
    pub text_chunks: usize,
    pub table_chunks: usize,
    /// Image references found; these are recorded but never embedded.
    pub images: Vec<String>,
    pub nodes_indexed: usize,
    pub index_version: u64,
}

/// Load, split, summarize and embed `docs` into `index`. Documents already
/// present (same id) are replaced.
pub fn ingest_documents(
    docs: &[RawDocument],
    models: &Models,
    max_tokens: usize,
    overlap: usize,
    index: &mut VectorIndex,
) -> Result<IngestReport> {
    let mut seen = HashSet::new();
    if let Some(dup) = docs.iter().find(|d| !seen.insert(d.id.as_str())) {
        return Err(Error::InvalidInput(format!("duplicate document id {:?}", dup.id)));
    }
    let mut report = IngestReport { documents: docs.len(), ..Default::default() };
    let mut inputs = Vec::new();
    for doc in docs {
        for chunk in load_document(doc)? {
            match chunk.modality {
                Modality::Text => {
                    report.text_chunks += 1;
                    for node in split_text(&chunk, max_tokens, overlap)? {
                        let summary = summarize_content(&node.id, Modality::Text, &node.text, models)?;
                        inputs.push(IndexInput {
                            node_id: node.id,
                            original_text: node.text,
                            summary_text: Some(summary.body),
                            modality: Modality::Text,
                            doc_id: doc.id.clone(),
                        });
                    }
                }
                Modality::Table => {
                    report.table_chunks += 1;
                    let summary = summarize_content(&chunk.id, Modality::Table, &chunk.content, models)?;
                    inputs.push(IndexInput {
                        node_id: chunk.id,
                        original_text: chunk.content,
                        summary_text: Some(summary.body),
                        modality: Modality::Table,
                        doc_id: doc.id.clone(),
                    });
                }
                Modality::Image => report.images.push(chunk.content),
            }
        }
    }
    for doc in docs {
        index.remove_doc(&doc.id);
    }
    report.nodes_indexed = inputs.len();
    index.embed_and_index(inputs, models.embedder.as_ref())?;
    report.index_version = index.version();
    Ok(report)
}

/// Shared index with snapshot reads and serialized writers. Readers hold an
/// `Arc` of the index they started with; ingestion builds a new index and
/// swaps it in.
#[derive(Debug)]
pub struct KnowledgeBase {
    current: RwLock<Arc<VectorIndex>>,
    writer: Mutex<()>,
}

impl KnowledgeBase {
    pub fn new(index: VectorIndex) -> Self {
        Self { current: RwLock::new(Arc::new(index)), writer: Mutex::new(()) }
    }

    pub fn snapshot(&self) -> Arc<VectorIndex> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn replace(&self, index: VectorIndex) {
        let _w = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        *self.current.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(index);
    }

    /// Run `update` on a copy of the current index and publish the result.
    pub fn update<T>(&self, update: impl FnOnce(&mut VectorIndex) -> Result<T>) -> Result<T> {
        let _w = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let mut next = (*self.snapshot()).clone();
        let out = update(&mut next)?;
        *self.current.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(next);
        Ok(out)
    }

    pub fn ingest(&self, docs: &[RawDocument], models: &Models, max_tokens: usize, overlap: usize) -> Result<IngestReport> {
        self.update(|idx| ingest_documents(docs, models, max_tokens, overlap, idx))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Document id: the path as written in the manifest.
    pub id: String,
    pub path: PathBuf,
    pub format_hint: FormatHint,
}

impl ManifestEntry {
    pub fn read(&self) -> Result<RawDocument> {
        let text = std::fs::read_to_string(&self.path)?;
        Ok(RawDocument {
            id: self.id.clone(),
            source_uri: self.path.to_string_lossy().into_owned(),
            text,
            format_hint: self.format_hint,
        })
    }
}

/// Parse a manifest: one `path[, format_hint]` per line, `#` comments.
/// Relative paths resolve against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (file, hint) = match line.rsplit_once(',') {
            Some((f, h)) => (f.trim(), h.parse::<FormatHint>().map_err(|e| {
                Error::InvalidInput(format!("manifest line {}: {e}", lineno + 1))
            })?),
            None => (line, FormatHint::default()),
        };
        let p = Path::new(file);
        let path = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        out.push(ManifestEntry { id: file.to_string(), path, format_hint: hint });
    }
    if out.is_empty() {
        return Err(Error::InvalidInput(format!("manifest {} lists no sources", path.display())));
    }
    Ok(out)
}
