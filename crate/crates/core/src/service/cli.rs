use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use super::{GatewayConfig, TranslationEngine};
use crate::baselines::PipelineKind;
use crate::corpus::read_manifest;
use crate::eval::load_dataset;
use crate::model::BackendKind;
use crate::refinement::IntentText;

#[derive(Debug, Parser)]
#[command(name = "intent-gateway", version, about = "Translate application intents into structured network intents")]
pub struct Cli {
    /// TOML configuration file
    #[arg(long, global = true, env = "GATEWAY_CONFIG")]
    config: Option<PathBuf>,

    /// Model backend, overriding the configuration
    #[arg(long, global = true, value_parser = parse_backend)]
    backend: Option<BackendKind>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and persist both indices from a manifest
    Ingest {
        /// One `path[, format_hint]` per line
        #[arg(long)]
        manifest: PathBuf,
        /// Output directory for intent.idx and vanilla.idx
        #[arg(long)]
        out: PathBuf,
    },
    /// Translate one intent and print the structured intent as JSON
    Translate {
        /// Index directory, overriding `index_dir`
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long, default_value = "intent_rag")]
        pipeline: PipelineKind,
        /// Natural-language intent
        intent: String,
    },
    /// Score pipelines on a dataset and write the report
    Evaluate {
        /// JSONL records of `{"intent", "ground_truth"}`
        #[arg(long)]
        dataset: PathBuf,
        /// Index directory, overriding `index_dir`
        #[arg(long)]
        index: Option<PathBuf>,
        /// Report JSON path; printed to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot-ready CSV table path
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values = ["vanilla_rag", "intent_rag", "no_rag"])]
        pipelines: Vec<PipelineKind>,
    },
    /// Run all three pipelines on a dataset and print the metric and timing table
    Compare {
        #[arg(long)]
        dataset: PathBuf,
        /// Index directory, overriding `index_dir`
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Run the HTTP service
    Serve {
        /// Index directory, overriding `index_dir`
        #[arg(long)]
        index: Option<PathBuf>,
        /// Listen address, overriding `server.bind`
        #[arg(long)]
        bind: Option<String>,
    },
}

fn parse_backend(s: &str) -> Result<BackendKind, String> {
    match s {
        "mock" => Ok(BackendKind::Mock),
        "remote" => Ok(BackendKind::Remote),
        other => Err(format!("unknown backend {other:?}, expected mock or remote")),
    }
}

/// Parses process arguments and runs; usage errors exit 2, runtime errors 1.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn init_logging() {
    let filter = tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into());
    let _ = tracing_subscriber::fmt().with_env_filter(filter).with_writer(std::io::stderr).try_init();
}

fn config_for(cli: &Cli, index: Option<&Path>) -> Result<GatewayConfig> {
    let mut config = GatewayConfig::load(cli.config.as_deref())?;
    if let Some(b) = cli.backend {
        config.backend = b;
    }
    if let Some(i) = index {
        config.index_dir = i.to_path_buf();
    }
    config.check()?;
    Ok(config)
}

pub fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Ingest { manifest, out } => {
            let config = config_for(&cli, Some(out))?;
            let docs = read_manifest(manifest)?
                .iter()
                .map(|e| e.read())
                .collect::<crate::Result<Vec<_>>>()?;
            let engine = TranslationEngine::from_config(config)?;
            let report = engine.ingest(&docs)?;
            engine.save(out).with_context(|| format!("writing {}", out.display()))?;
            emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
        }
        Command::Translate { index, pipeline, intent } => {
            let config = config_for(&cli, index.as_deref())?;
            let intent = IntentText::new(intent.as_str())?;
            let engine = TranslationEngine::open(config)?;
            let t = engine.translate(*pipeline, &intent)?;
            let mut body = t.to_json();
            body["duration_seconds"] = t.duration_seconds.into();
            emit(&(serde_json::to_string_pretty(&body)? + "\n"))?;
        }
        Command::Evaluate { dataset, index, out, csv, pipelines } => {
            let config = config_for(&cli, index.as_deref())?;
            let items = load_dataset(dataset)?;
            let engine = TranslationEngine::open(config)?;
            let report = engine.evaluate(&items, pipelines)?;
            match out {
                Some(p) => std::fs::write(p, report.to_json()).with_context(|| format!("writing {}", p.display()))?,
                None => emit(&(report.to_json() + "\n"))?,
            }
            if let Some(p) = csv {
                std::fs::write(p, report.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Command::Compare { dataset, index } => {
            let config = config_for(&cli, index.as_deref())?;
            let items = load_dataset(dataset)?;
            let engine = TranslationEngine::open(config)?;
            let report = engine.evaluate(&items, &PipelineKind::ALL)?;
            emit(&report.to_table())?;
        }
        Command::Serve { index, bind } => {
            let mut config = config_for(&cli, index.as_deref())?;
            if let Some(b) = bind {
                config.server.bind = b.clone();
            }
            let addr: SocketAddr = config.server.bind.parse().with_context(|| format!("bad bind address {:?}", config.server.bind))?;
            let engine = if config.intent_index_path().exists() {
                TranslationEngine::open(config)?
            } else {
                tracing::warn!(dir = %config.index_dir.display(), "no index found, starting empty");
                TranslationEngine::from_config(config)?
            };
            let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            runtime.block_on(super::http::serve(Arc::new(engine), addr))?;
        }
    }
    Ok(())
}
