//! Model gateway: every chat completion and embedding call goes through the
//! [`ChatModel`] and [`Embedder`] traits.
//!
//! Two backends implement them. [`mock`] answers from a deterministic rule
//! table and a hashed trigram embedder, which is enough to run every pipeline
//! offline. [`remote`] speaks the common JSON chat-completion and embedding
//! wire format over HTTP.

pub mod embed;
pub mod mock;
pub mod remote;

use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embed::TrigramEmbedder;
pub use mock::{MockChat, MockRule, MockRuleTable};
pub use remote::{RemoteChat, RemoteConfig, RemoteEmbedder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model request: {0}")]
    InvalidRequest(String),
    #[error("model request timed out after {0:?}")]
    Timeout(Duration),
    #[error("model transport error: {0}")]
    Transport(String),
    #[error("model endpoint returned status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("could not decode model response: {0}")]
    Decode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Reasoning,
    Instruction,
    Summarization,
    Embedding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    Mock,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelProfile {
    pub name: String,
    pub kind: ModelKind,
    pub backend: BackendKind,
}

impl ModelProfile {
    pub fn new(name: impl Into<String>, kind: ModelKind, backend: BackendKind) -> Self {
        Self { name: name.into(), kind, backend }
    }
}

/// The four model roles used by the pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profiles {
    pub reasoning: ModelProfile,
    pub instruction: ModelProfile,
    pub summarization: ModelProfile,
    pub embedding: ModelProfile,
}

impl Profiles {
    pub fn with_backend(backend: BackendKind) -> Self {
        Self {
            reasoning: ModelProfile::new("o1-mini", ModelKind::Reasoning, backend),
            instruction: ModelProfile::new("gpt-3.5-turbo-instruct", ModelKind::Instruction, backend),
            summarization: ModelProfile::new("gpt-3.5-turbo", ModelKind::Summarization, backend),
            embedding: ModelProfile::new("text-embedding-ada-002", ModelKind::Embedding, backend),
        }
    }

    pub fn for_kind(&self, kind: ModelKind) -> &ModelProfile {
        match kind {
            ModelKind::Reasoning => &self.reasoning,
            ModelKind::Instruction => &self.instruction,
            ModelKind::Summarization => &self.summarization,
            ModelKind::Embedding => &self.embedding,
        }
    }
}

impl Default for Profiles {
    fn default() -> Self {
        Self::with_backend(BackendKind::Mock)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub profile: ModelProfile,
    pub prompt: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
}

impl ChatRequest {
    pub fn new(profile: ModelProfile, prompt: impl Into<String>) -> Self {
        Self { profile, prompt: prompt.into(), temperature: 0.0, max_output_tokens: 512 }
    }

    pub fn check(&self) -> Result<(), ModelError> {
        if self.prompt.trim().is_empty() {
            return Err(ModelError::InvalidRequest("prompt is empty".into()));
        }
        if self.profile.kind == ModelKind::Embedding {
            return Err(ModelError::InvalidRequest(format!(
                "profile {} is an embedding model",
                self.profile.name
            )));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(ModelError::InvalidRequest("temperature must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub text: String,
    pub model_name: String,
    pub latency_seconds: f64,
}

pub trait ChatModel: Send + Sync {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, ModelError>;
}

pub trait Embedder: Send + Sync {
    fn dimension(&self) -> usize;

    /// One vector per input, each unit length or all-zero for empty text.
    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, ModelError>;

    fn embed_one(&self, text: &str) -> Result<Vec<f32>, ModelError> {
        let mut v = self.embed(&[text])?;
        v.pop().ok_or_else(|| ModelError::Decode("embedder returned no vectors".into()))
    }
}

impl<T: ChatModel + ?Sized> ChatModel for Arc<T> {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, ModelError> {
        (**self).complete(req)
    }
}

impl<T: Embedder + ?Sized> Embedder for Arc<T> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, ModelError> {
        (**self).embed(texts)
    }
}

/// Chat model, embedder and profiles bundled for the pipelines.
#[derive(Clone)]
pub struct Models {
    pub chat: Arc<dyn ChatModel>,
    pub embedder: Arc<dyn Embedder>,
    pub profiles: Profiles,
}

impl Models {
    pub fn mock() -> Self {
        Self {
            chat: Arc::new(MockChat::default()),
            embedder: Arc::new(TrigramEmbedder::default()),
            profiles: Profiles::default(),
        }
    }

    pub fn remote(config: &RemoteConfig, profiles: Profiles) -> Result<Self, ModelError> {
        let chat = RemoteChat::new(config.clone())?;
        let embedder = RemoteEmbedder::new(config.clone(), profiles.embedding.name.clone())?;
        Ok(Self { chat: Arc::new(chat), embedder: Arc::new(embedder), profiles })
    }

    pub fn ask(&self, kind: ModelKind, prompt: impl Into<String>) -> Result<ChatResponse, ModelError> {
        let req = ChatRequest::new(self.profiles.for_kind(kind).clone(), prompt);
        self.chat.complete(&req)
    }
}

impl std::fmt::Debug for Models {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Models").field("profiles", &self.profiles).finish_non_exhaustive()
    }
}

/// Normalize in place to unit L2 norm; all-zero vectors stay zero.
pub fn normalize(v: &mut [f32]) {
    let norm = v.iter().map(|x| f64::from(*x) * f64::from(*x)).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x = (f64::from(*x) / norm) as f32;
        }
    }
}

/// Cosine similarity accumulated in f64. Zero vectors score 0.
pub fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let mut dot = 0.0f64;
    let mut na = 0.0f64;
    let mut nb = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (f64::from(*x), f64::from(*y));
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}
