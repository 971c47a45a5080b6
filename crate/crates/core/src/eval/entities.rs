//! Deterministic entity extraction for the retrieval and faithfulness metrics.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::structuring::{clean_model_text, shifted};
use crate::text::match_key;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Quantity,
    ScenarioName,
    MetricName,
    ResolutionLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Entity {
    pub kind: EntityKind,
    pub normalized: String,
}

impl Entity {
    fn new(kind: EntityKind, normalized: impl Into<String>) -> Self {
        Self { kind, normalized: normalized.into() }
    }

    pub fn quantity(value: f64, unit: &str) -> Self {
        let unit = unit.to_lowercase();
        if unit.is_empty() {
            Self::new(EntityKind::Quantity, format!("{value:e}"))
        } else {
            Self::new(EntityKind::Quantity, format!("{value} {unit}"))
        }
    }

    pub fn metric(name: &str) -> Self {
        Self::new(EntityKind::MetricName, name)
    }

    pub fn is_value(&self) -> bool {
        matches!(self.kind, EntityKind::Quantity | EntityKind::ResolutionLabel)
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            EntityKind::Quantity => "quantity",
            EntityKind::ScenarioName => "scenario_name",
            EntityKind::MetricName => "metric_name",
            EntityKind::ResolutionLabel => "resolution_label",
        };
        write!(f, "{kind}({})", self.normalized)
    }
}

static QUANTITY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?:^|[^\w.^])([+-]?\d+(?:\.\d+)?)\s*(Mbps|Gbps|ms|dBm|dB|fps)\b").unwrap());
static POWER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b10\s*\^\s*\{?\s*([+-]?\d+)\s*\}?").unwrap());
static RESOLUTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(3K|4K|8K|1080p)\b").unwrap());
static METRICS: LazyLock<Vec<(&'static str, Regex)>> = LazyLock::new(|| {
    [
        ("throughput", r"(?i)\b(?:throughput|data\s+rate|bandwidth)\b"),
        ("rtt_delay", r"(?i)\b(?:rtt|delay|latency)\b"),
        ("packet_loss_rate", r"(?i)\bpacket\s+loss\b"),
        ("resolution", r"(?i)\bresolution\b"),
        ("rsrp", r"(?i)\brsrp\b"),
        ("sinr", r"(?i)\bsinr\b"),
        ("frame_rate", r"(?i)\bframe\s+rate\b"),
    ]
    .into_iter()
    .map(|(name, pattern)| (name, Regex::new(pattern).unwrap()))
    .collect()
});

/// Known scenario names, matched on their normalized word sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityLexicon {
    scenarios: Vec<(String, String)>,
}

impl EntityLexicon {
    pub fn new<I, S>(scenario_names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut scenarios: Vec<(String, String)> = scenario_names
            .into_iter()
            .map(|n| (n.as_ref().to_string(), format!(" {} ", match_key(n.as_ref()))))
            .filter(|(_, key)| !key.trim().is_empty())
            .collect();
        scenarios.sort();
        scenarios.dedup_by(|a, b| a.1 == b.1);
        Self { scenarios }
    }

    pub fn extract(&self, text: &str) -> BTreeSet<Entity> {
        let text = clean_model_text(text);
        let mut out = BTreeSet::new();
        for c in QUANTITY.captures_iter(&text) {
            let (number, unit) = (&c[1], &c[2]);
            let (shift, unit) = if unit == "Gbps" { (3, "Mbps") } else { (0, unit) };
            if let Some(v) = shifted(number, shift) {
                out.insert(Entity::quantity(v, unit));
            }
        }
        for c in POWER.captures_iter(&text) {
            if let Ok(k) = c[1].parse::<i32>() {
                if let Ok(v) = format!("1e{k}").parse::<f64>() {
                    out.insert(Entity::quantity(v, ""));
                }
            }
        }
        for c in RESOLUTION.captures_iter(&text) {
            out.insert(Entity::new(EntityKind::ResolutionLabel, c[1].to_lowercase()));
        }
        for (name, re) in METRICS.iter() {
            if re.is_match(&text) {
                out.insert(Entity::metric(name));
            }
        }
        if !self.scenarios.is_empty() {
            let key = format!(" {} ", match_key(&text));
            for (_, scenario_key) in &self.scenarios {
                if key.contains(scenario_key.as_str()) {
                    out.insert(Entity::new(EntityKind::ScenarioName, scenario_key.trim()));
                }
            }
        }
        out
    }
}

/// Entities of `text` with no scenario names known.
pub fn extract_entities(text: &str) -> BTreeSet<Entity> {
    EntityLexicon::default().extract(text)
}
