use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::{DEFAULT_VANILLA_TOP_K, DEFAULT_WINDOW};
use crate::corpus::{DEFAULT_MAX_TOKENS, DEFAULT_OVERLAP};
use crate::error::{Error, Result};
use crate::eval::EvalOptions;
use crate::model::{BackendKind, Profiles, RemoteConfig};
use crate::prompts;
use crate::structuring::PipelineConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelNames {
    pub reasoning: String,
    pub instruction: String,
    pub summarization: String,
    pub embedding: String,
}

impl Default for ModelNames {
    fn default() -> Self {
        let p = Profiles::default();
        Self {
            reasoning: p.reasoning.name,
            instruction: p.instruction.name,
            summarization: p.summarization.name,
            embedding: p.embedding.name,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChunkingConfig {
    pub max_tokens: usize,
    pub overlap: usize,
}

impl Default for ChunkingConfig {
    fn default() -> Self {
        Self { max_tokens: DEFAULT_MAX_TOKENS, overlap: DEFAULT_OVERLAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct VanillaConfig {
    pub window: usize,
    pub top_k: usize,
}

impl Default for VanillaConfig {
    fn default() -> Self {
        Self { window: DEFAULT_WINDOW, top_k: DEFAULT_VANILLA_TOP_K }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServerConfig {
    pub bind: String,
    pub max_concurrent: usize,
    pub persist_ingest: bool,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self { bind: "127.0.0.1:8080".into(), max_concurrent: 8, persist_ingest: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GatewayConfig {
    pub backend: BackendKind,
    pub index_dir: PathBuf,
    pub domain_instruction: String,
    pub models: ModelNames,
    pub remote: RemoteConfig,
    pub chunking: ChunkingConfig,
    pub pipeline: PipelineConfig,
    pub vanilla: VanillaConfig,
    pub server: ServerConfig,
    pub eval: EvalOptions,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        Self {
            backend: BackendKind::Mock,
            index_dir: PathBuf::from("idx"),
            domain_instruction: prompts::DOMAIN_INSTRUCTION.to_string(),
            models: ModelNames::default(),
            remote: RemoteConfig::default(),
            chunking: ChunkingConfig::default(),
            pipeline: PipelineConfig::default(),
            vanilla: VanillaConfig::default(),
            server: ServerConfig::default(),
            eval: EvalOptions::default(),
        }
    }
}

impl GatewayConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        config.check()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Reads `path` when given, otherwise starts from defaults; then applies environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut config = match path {
            Some(p) => Self::from_toml(&std::fs::read_to_string(p)?)?,
            None => Self::default(),
        };
        config.remote.apply_env();
        Ok(config)
    }

    pub fn check(&self) -> Result<()> {
        self.pipeline.check()?;
        if self.chunking.max_tokens == 0 || self.chunking.overlap >= self.chunking.max_tokens {
            return Err(Error::BadParams(format!(
                "need 0 <= overlap < max_tokens, got overlap={} max_tokens={}",
                self.chunking.overlap, self.chunking.max_tokens
            )));
        }
        if self.vanilla.top_k == 0 {
            return Err(Error::BadParams("vanilla.top_k must be at least 1".into()));
        }
        if self.server.max_concurrent == 0 {
            return Err(Error::BadParams("server.max_concurrent must be at least 1".into()));
        }
        if self.domain_instruction.trim().is_empty() {
            return Err(Error::BadParams("domain_instruction is empty".into()));
        }
        Ok(())
    }

    pub fn profiles(&self) -> Profiles {
        let mut p = Profiles::with_backend(self.backend);
        p.reasoning.name = self.models.reasoning.clone();
        p.instruction.name = self.models.instruction.clone();
        p.summarization.name = self.models.summarization.clone();
        p.embedding.name = self.models.embedding.clone();
        p
    }

    pub fn intent_index_path(&self) -> PathBuf {
        self.index_dir.join("intent.idx")
    }

    pub fn vanilla_index_path(&self) -> PathBuf {
        self.index_dir.join("vanilla.idx")
    }
}
