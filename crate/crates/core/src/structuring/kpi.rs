//! Structured network intent: scenario type plus typed KPIs, with the
//! canonical text form used for prompts, golden tests and metrics.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    DownlinkThroughput,
    RttDelay,
    PacketLossRate,
    Resolution,
    Rsrp,
    Sinr,
    Other(String),
}

impl Metric {
    pub fn display_name(&self) -> &str {
        match self {
            Metric::DownlinkThroughput => "Data Rate/Throughput",
            Metric::RttDelay => "Delay",
            Metric::PacketLossRate => "Packet Loss Rate",
            Metric::Resolution => "Resolution",
            Metric::Rsrp => "Coverage Level CSI RSRP",
            Metric::Sinr => "Coverage Quality CSI SINR",
            Metric::Other(name) => name,
        }
    }

    /// Unit the metric must carry.
    pub fn expected_unit(&self) -> Option<Unit> {
        match self {
            Metric::DownlinkThroughput => Some(Unit::Mbps),
            Metric::RttDelay => Some(Unit::Ms),
            Metric::PacketLossRate => Some(Unit::Dimensionless),
            Metric::Resolution => Some(Unit::Label),
            Metric::Rsrp => Some(Unit::DBm),
            Metric::Sinr => Some(Unit::DB),
            Metric::Other(_) => None,
        }
    }

    pub fn wire_name(&self) -> String {
        match self {
            Metric::DownlinkThroughput => "downlink_throughput".into(),
            Metric::RttDelay => "rtt_delay".into(),
            Metric::PacketLossRate => "packet_loss_rate".into(),
            Metric::Resolution => "resolution".into(),
            Metric::Rsrp => "rsrp".into(),
            Metric::Sinr => "sinr".into(),
            Metric::Other(name) => format!("other({name})"),
        }
    }

    pub fn from_wire(s: &str) -> Option<Metric> {
        Some(match s {
            "downlink_throughput" => Metric::DownlinkThroughput,
            "rtt_delay" => Metric::RttDelay,
            "packet_loss_rate" => Metric::PacketLossRate,
            "resolution" => Metric::Resolution,
            "rsrp" => Metric::Rsrp,
            "sinr" => Metric::Sinr,
            other => Metric::Other(other.strip_prefix("other(")?.strip_suffix(')')?.to_string()),
        })
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.wire_name())
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Metric::from_wire(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown metric {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Eq => "",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    Mbps,
    #[serde(rename = "ms")]
    Ms,
    #[serde(rename = "dimensionless")]
    Dimensionless,
    #[serde(rename = "dBm")]
    DBm,
    #[serde(rename = "dB")]
    DB,
    #[serde(rename = "label")]
    Label,
}

impl Unit {
    fn suffix(self) -> &'static str {
        match self {
            Unit::Mbps => " Mbps",
            Unit::Ms => " ms",
            Unit::DBm => " dBm",
            Unit::DB => " dB",
            Unit::Dimensionless | Unit::Label => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KpiValue {
    Number(f64),
    Label(String),
}

impl KpiValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            KpiValue::Number(v) => Some(*v),
            KpiValue::Label(_) => None,
        }
    }
}

/// Exact power of ten, if `v` is one: `1e-3` gives `Some(-3)`.
pub(crate) fn power_of_ten(v: f64) -> Option<i32> {
    if v <= 0.0 || !v.is_finite() {
        return None;
    }
    let k = v.log10().round() as i32;
    (format!("1e{k}").parse::<f64>().ok() == Some(v)).then_some(k)
}

pub(crate) fn format_number(v: f64, unit: Unit) -> String {
    if unit == Unit::Dimensionless {
        if let Some(k) = power_of_ten(v).filter(|k| *k < 0) {
            return format!("10^{k}");
        }
    }
    format!("{v}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kpi {
    pub metric: Metric,
    pub comparator: Comparator,
    pub value: KpiValue,
    pub unit: Unit,
    pub qualifier: Option<String>,
}

impl Kpi {
    pub fn number(metric: Metric, comparator: Comparator, value: f64, unit: Unit) -> Self {
        Self { metric, comparator, value: KpiValue::Number(value), unit, qualifier: None }
    }

    pub fn label(metric: Metric, label: impl Into<String>) -> Self {
        Self {
            metric,
            comparator: Comparator::Eq,
            value: KpiValue::Label(label.into()),
            unit: Unit::Label,
            qualifier: None,
        }
    }

    pub fn with_qualifier(mut self, q: impl Into<String>) -> Self {
        self.qualifier = Some(q.into());
        self
    }

    /// Canonical value text, e.g. `RTT < 100 ms` or `10^-3 (TCP)`.
    pub fn value_text(&self) -> String {
        let mut out = String::new();
        if self.metric == Metric::RttDelay {
            out.push_str("RTT ");
        }
        let sym = self.comparator.symbol();
        if !sym.is_empty() {
            out.push_str(sym);
            out.push(' ');
        }
        match &self.value {
            KpiValue::Number(v) => {
                out.push_str(&format_number(*v, self.unit));
                out.push_str(self.unit.suffix());
            }
            KpiValue::Label(l) => out.push_str(l),
        }
        if let Some(q) = &self.qualifier {
            out.push_str(" (");
            out.push_str(q);
            out.push(')');
        }
        out
    }

    /// Canonical item text, e.g. `Delay: RTT < 100 ms`.
    pub fn item_text(&self) -> String {
        format!("{}: {}", self.metric.display_name(), self.value_text())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuredNetworkIntent {
    pub scenario_type: String,
    pub kpis: Vec<Kpi>,
    #[serde(default)]
    pub provenance: Vec<String>,
    #[serde(default)]
    pub raw_model_output: String,
}

impl StructuredNetworkIntent {
    pub fn new(scenario_type: impl Into<String>, kpis: Vec<Kpi>) -> Self {
        Self { scenario_type: scenario_type.into(), kpis, provenance: Vec::new(), raw_model_output: String::new() }
    }

    /// Same scenario and KPIs, ignoring provenance and raw output.
    pub fn same_content(&self, other: &Self) -> bool {
        self.scenario_type == other.scenario_type && self.kpis == other.kpis
    }

    /// Canonical text: ASCII comparators, `10^-k` notation, one item per KPI.
    pub fn to_canonical(&self) -> String {
        let items: Vec<String> = self.kpis.iter().map(Kpi::item_text).collect();
        format!("Scenario Type: {}, Key Performance Factors: {}", self.scenario_type, items.join(", "))
    }
}

impl fmt::Display for StructuredNetworkIntent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_of_ten_detection() {
        assert_eq!(power_of_ten(1e-3), Some(-3));
        assert_eq!(power_of_ten(0.01), Some(-2));
        assert_eq!(power_of_ten(0.003), None);
        assert_eq!(power_of_ten(100.0), Some(2));
    }

    #[test]
    fn item_text_forms() {
        let k = Kpi::number(Metric::RttDelay, Comparator::Lt, 100.0, Unit::Ms);
        assert_eq!(k.item_text(), "Delay: RTT < 100 ms");
        let k = Kpi::number(Metric::PacketLossRate, Comparator::Eq, 1e-3, Unit::Dimensionless).with_qualifier("TCP");
        assert_eq!(k.item_text(), "Packet Loss Rate: 10^-3 (TCP)");
        let k = Kpi::number(Metric::Rsrp, Comparator::Eq, -113.0, Unit::DBm);
        assert_eq!(k.item_text(), "Coverage Level CSI RSRP: -113 dBm");
    }

    #[test]
    fn metric_wire_names() {
        for m in [Metric::DownlinkThroughput, Metric::Sinr, Metric::Other("Frame Rate".into())] {
            assert_eq!(Metric::from_wire(&m.wire_name()), Some(m));
        }
        assert_eq!(Metric::from_wire("bogus"), None);
    }

    #[test]
    fn json_spellings() {
        let k = Kpi::number(Metric::Rsrp, Comparator::Le, -107.0, Unit::DBm);
        let v = serde_json::to_value(&k).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"metric": "rsrp", "comparator": "le", "value": -107.0, "unit": "dBm", "qualifier": null})
        );
        let l = serde_json::to_value(Kpi::label(Metric::Resolution, "4K")).unwrap();
        assert_eq!(l["value"], "4K");
        assert_eq!(l["unit"], "label");
    }
}
