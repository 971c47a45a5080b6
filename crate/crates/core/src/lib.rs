//! Intent translation gateway.
//!
//! Ingests network technical documents into a searchable knowledge base and
//! translates natural-language application intents into structured network
//! intents (a scenario type plus a typed KPI list). Three pipelines share the
//! same model gateway and generation prompt:
//!
//! * `intent_rag`: intent refinement against a scenario catalog, retrieval
//!   over modality-aware summaries, reranking, then generation.
//! * `vanilla_rag`: sentence-window retrieval on the raw intent.
//! * `no_rag`: generation without any retrieved context.
//!
//! The [`eval`] module scores all three with retrieval and generation metrics.

pub mod baselines;
pub mod corpus;
pub mod error;
pub mod eval;
pub(crate) mod grid;
pub mod model;
pub mod prompts;
pub mod refinement;
pub mod service;
pub mod structuring;
pub mod text;

pub use error::{Error, Result};
