use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::kpi::{KpiValue, Metric, StructuredNetworkIntent, Unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    EmptyScenario,
    NoKpis,
    Range,
    UnitMismatch,
    Conflict,
    Duplicate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub metric: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks KPI ranges, units and internal consistency. Never fails; problems are reported.
pub fn validate(sni: &StructuredNetworkIntent) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |kind, metric: Option<&Metric>, message: String| {
        violations.push(Violation { kind, metric: metric.map(Metric::wire_name), message });
    };

    if sni.scenario_type.trim().is_empty() {
        push(ViolationKind::EmptyScenario, None, "scenario_type is empty".into());
    }
    if sni.kpis.is_empty() {
        push(ViolationKind::NoKpis, None, "no KPIs".into());
    }

    let mut seen: HashMap<(&Metric, Option<&str>), &KpiValue> = HashMap::new();
    for kpi in &sni.kpis {
        let m = &kpi.metric;
        if let Some(expected) = m.expected_unit() {
            if kpi.unit != expected {
                push(
                    ViolationKind::UnitMismatch,
                    Some(m),
                    format!("{} expects {:?}, got {:?}", m.wire_name(), expected, kpi.unit),
                );
            }
        }
        let label_value = matches!(kpi.value, KpiValue::Label(_));
        if label_value != (kpi.unit == Unit::Label) {
            push(ViolationKind::UnitMismatch, Some(m), format!("{} value does not match unit {:?}", m.wire_name(), kpi.unit));
        }
        if let KpiValue::Number(v) = kpi.value {
            let out_of_range = match m {
                Metric::DownlinkThroughput => (v.is_nan() || v <= 0.0).then_some("downlink_throughput > 0"),
                Metric::RttDelay => (v.is_nan() || v <= 0.0).then_some("rtt_delay > 0"),
                Metric::PacketLossRate => (!(0.0..=1.0).contains(&v) || v == 0.0).then_some("packet_loss_rate ∈ (0,1]"),
                _ => (!v.is_finite()).then_some("finite value"),
            };
            if let Some(bound) = out_of_range {
                push(ViolationKind::Range, Some(m), format!("{v} violates {bound}"));
            }
        }
        let key = (m, kpi.qualifier.as_deref());
        match seen.get(&key) {
            Some(prev) if **prev != kpi.value => push(
                ViolationKind::Conflict,
                Some(m),
                format!("{} has conflicting values {:?} and {:?}", m.wire_name(), prev, kpi.value),
            ),
            Some(_) => push(ViolationKind::Duplicate, Some(m), format!("{} listed twice", m.wire_name())),
            None => {
                seen.insert(key, &kpi.value);
            }
        }
    }
    ValidationReport { violations }
}
