#![allow(dead_code)]

pub mod props;

use std::path::{Path, PathBuf};

use intent_rag::corpus::{read_manifest, FormatHint, RawDocument};
use intent_rag::service::{GatewayConfig, TranslationEngine};
use intent_rag::structuring::{Comparator, Kpi, Metric, StructuredNetworkIntent, Unit};

pub const VR_INTENT: &str = "I want to play a virtual reality game without feeling motion sickness";
pub const PLANE_INTENT: &str = "I want internet access with fast browsing service in the airoplane";

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_docs() -> Vec<RawDocument> {
    read_manifest(&fixture("manifest.txt")).unwrap().iter().map(|e| e.read().unwrap()).collect()
}

pub fn kpi_table_doc() -> RawDocument {
    RawDocument::new("kpi_table.md", std::fs::read_to_string(fixture("kpi_table.md")).unwrap(), FormatHint::MarkdownLike)
}

/// Mock-backed engine with both fixture indices built.
pub fn engine() -> TranslationEngine {
    engine_with(GatewayConfig::default())
}

pub fn engine_with(config: GatewayConfig) -> TranslationEngine {
    let engine = TranslationEngine::from_config(config).unwrap();
    engine.ingest(&fixture_docs()).unwrap();
    engine
}

pub fn gt_4k() -> StructuredNetworkIntent {
    StructuredNetworkIntent::new(
        "4K On Demand Video",
        vec![
            Kpi::number(Metric::DownlinkThroughput, Comparator::Eq, 30.0, Unit::Mbps).with_qualifier("downlink"),
            Kpi::number(Metric::RttDelay, Comparator::Lt, 100.0, Unit::Ms),
            Kpi::number(Metric::PacketLossRate, Comparator::Eq, 1e-3, Unit::Dimensionless),
            Kpi::label(Metric::Resolution, "4K"),
            Kpi::number(Metric::Rsrp, Comparator::Eq, -113.0, Unit::DBm),
            Kpi::number(Metric::Sinr, Comparator::Eq, -2.0, Unit::DB),
        ],
    )
}

pub fn gt_vr() -> StructuredNetworkIntent {
    StructuredNetworkIntent::new(
        "3K Cloud VR (Game)",
        vec![
            Kpi::number(Metric::DownlinkThroughput, Comparator::Eq, 100.0, Unit::Mbps).with_qualifier("downlink"),
            Kpi::number(Metric::RttDelay, Comparator::Lt, 25.0, Unit::Ms),
            Kpi::number(Metric::PacketLossRate, Comparator::Eq, 1e-3, Unit::Dimensionless).with_qualifier("TCP"),
            Kpi::number(Metric::PacketLossRate, Comparator::Eq, 1e-2, Unit::Dimensionless).with_qualifier("UDP"),
            Kpi::label(Metric::Resolution, "3K"),
            Kpi::number(Metric::Rsrp, Comparator::Eq, -107.0, Unit::DBm),
            Kpi::number(Metric::Sinr, Comparator::Eq, 2.0, Unit::DB),
        ],
    )
}

/// Mock chat that keeps every request it answers.
#[derive(Default)]
pub struct Recorder {
    inner: intent_rag::model::MockChat,
    pub requests: std::sync::Mutex<Vec<intent_rag::model::ChatRequest>>,
}

impl intent_rag::model::ChatModel for Recorder {
    fn complete(
        &self,
        req: &intent_rag::model::ChatRequest,
    ) -> Result<intent_rag::model::ChatResponse, intent_rag::model::ModelError> {
        self.requests.lock().unwrap().push(req.clone());
        self.inner.complete(req)
    }
}

impl Recorder {
    pub fn take(&self) -> Vec<intent_rag::model::ChatRequest> {
        std::mem::take(&mut self.requests.lock().unwrap())
    }
}

/// Mock models whose chat calls are recorded.
pub fn recording_models() -> (intent_rag::model::Models, std::sync::Arc<Recorder>) {
    let rec = std::sync::Arc::new(Recorder::default());
    let models = intent_rag::model::Models { chat: rec.clone(), ..intent_rag::model::Models::mock() };
    (models, rec)
}
