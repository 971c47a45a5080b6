use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::Modality;
use crate::model::{cosine, Embedder};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Payload {
    pub original_text: String,
    pub summary_text: Option<String>,
    pub modality: Modality,
    pub doc_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedNode {
    pub node_id: String,
    pub vector: Vec<f32>,
    pub payload: Payload,
}

impl EmbeddedNode {
    /// Embedded from empty text; scores 0 against every query.
    pub fn is_degenerate(&self) -> bool {
        self.vector.iter().all(|x| *x == 0.0)
    }
}

/// Input to [`VectorIndex::embed_and_index`]. The vector is computed from
/// `summary_text` when present, otherwise from `original_text`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexInput {
    pub node_id: String,
    pub original_text: String,
    pub summary_text: Option<String>,
    pub modality: Modality,
    pub doc_id: String,
}

impl IndexInput {
    fn search_text(&self) -> &str {
        self.summary_text.as_deref().unwrap_or(&self.original_text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredNode {
    pub node_id: String,
    pub score: f64,
    /// Insertion position in the index.
    pub position: usize,
}

/// Exact cosine-similarity index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VectorIndex {
    dimension: usize,
    entries: Vec<EmbeddedNode>,
    positions: HashMap<String, usize>,
    version: u64,
}

impl VectorIndex {
    pub fn new(dimension: usize) -> Self {
        Self { dimension, ..Default::default() }
    }

    pub(crate) fn from_parts(dimension: usize, version: u64, entries: Vec<EmbeddedNode>) -> Result<Self> {
        let mut index = Self { dimension, version, ..Default::default() };
        for e in entries {
            if e.vector.len() != dimension {
                return Err(Error::CorruptIndex(format!("entry {} has wrong dimension", e.node_id)));
            }
            if index.positions.insert(e.node_id.clone(), index.entries.len()).is_some() {
                return Err(Error::CorruptIndex(format!("duplicate node id {}", e.node_id)));
            }
            index.entries.push(e);
        }
        Ok(index)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EmbeddedNode] {
        &self.entries
    }

    pub fn get(&self, node_id: &str) -> Option<&EmbeddedNode> {
        self.positions.get(node_id).map(|&i| &self.entries[i])
    }

    /// Insert or replace nodes. Replaced nodes keep their insertion position.
    /// Bumps the version once per non-empty batch.
    pub fn upsert(&mut self, nodes: Vec<EmbeddedNode>) -> Result<()> {
        if let Some(bad) = nodes.iter().find(|n| n.vector.len() != self.dimension) {
            return Err(Error::DimensionMismatch { expected: self.dimension, actual: bad.vector.len() });
        }
        if nodes.is_empty() {
            return Ok(());
        }
        for node in nodes {
            match self.positions.get(&node.node_id) {
                Some(&i) => self.entries[i] = node,
                None => {
                    self.positions.insert(node.node_id.clone(), self.entries.len());
                    self.entries.push(node);
                }
            }
        }
        self.version += 1;
        Ok(())
    }

    /// Drop every entry of `doc_id`. Returns how many were removed.
    pub fn remove_doc(&mut self, doc_id: &str) -> usize {
        let before = self.entries.len();
        self.entries.retain(|e| e.payload.doc_id != doc_id);
        let removed = before - self.entries.len();
        if removed > 0 {
            self.positions =
                self.entries.iter().enumerate().map(|(i, e)| (e.node_id.clone(), i)).collect();
            self.version += 1;
        }
        removed
    }

    /// Embed each input (summary when present, else original) and upsert it.
    /// The payload always keeps the original content.
    pub fn embed_and_index(&mut self, inputs: Vec<IndexInput>, embedder: &dyn Embedder) -> Result<()> {
        if embedder.dimension() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, actual: embedder.dimension() });
        }
        let texts: Vec<&str> = inputs.iter().map(IndexInput::search_text).collect();
        let vectors = embedder.embed(&texts)?;
        if vectors.len() != inputs.len() {
            return Err(Error::InvalidInput(format!(
                "embedder returned {} vectors for {} inputs",
                vectors.len(),
                inputs.len()
            )));
        }
        let nodes = inputs
            .into_iter()
            .zip(vectors)
            .map(|(input, vector)| EmbeddedNode {
                node_id: input.node_id,
                vector,
                payload: Payload {
                    original_text: input.original_text,
                    summary_text: input.summary_text,
                    modality: input.modality,
                    doc_id: input.doc_id,
                },
            })
            .collect();
        self.upsert(nodes)
    }

    /// Top-`k` entries by cosine similarity, descending, ties by insertion order.
    pub fn query(&self, query: &[f32], k: usize) -> Result<Vec<ScoredNode>> {
        if k == 0 {
            return Err(Error::BadParams("k must be at least 1".into()));
        }
        if self.entries.is_empty() {
            return Err(Error::EmptyIndex);
        }
        if query.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, actual: query.len() });
        }
        let mut scored: Vec<ScoredNode> = self
            .entries
            .iter()
            .enumerate()
            .map(|(position, e)| ScoredNode {
                node_id: e.node_id.clone(),
                score: cosine(query, &e.vector),
                position,
            })
            .collect();
        scored.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.position.cmp(&b.position)));
        scored.truncate(k);
        Ok(scored)
    }
}
