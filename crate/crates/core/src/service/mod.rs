//! Operational surface: configuration, the translation engine, the HTTP API and the CLI.

pub mod cli;
mod config;
mod engine;
pub mod http;

pub use config::{ChunkingConfig, GatewayConfig, ModelNames, ServerConfig, VanillaConfig};
pub use engine::TranslationEngine;

use crate::error::Result;
use crate::model::{BackendKind, Models};

/// Builds the models selected by `config.backend`.
pub fn models_for(config: &GatewayConfig) -> Result<Models> {
    let profiles = config.profiles();
    match config.backend {
        BackendKind::Mock => Ok(Models { profiles, ..Models::mock() }),
        BackendKind::Remote => Ok(Models::remote(&config.remote, profiles)?),
    }
}
