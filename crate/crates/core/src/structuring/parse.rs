use std::collections::HashSet;
use std::sync::LazyLock;

use regex::Regex;

use super::kpi::{Comparator, Kpi, KpiValue, Metric, StructuredNetworkIntent, Unit};
use crate::error::{Error, Result};

static HEADER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)scenario\s*type\s*:").unwrap());
static KPF: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)key\s*performance\s*(?:factors?|indicators?)\s*:?").unwrap());
static RTT_PREFIX: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^rtt\b\s*").unwrap());
static COMPARATOR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(<=|>=|≤|≥|<|>|=)\s*").unwrap());
static POWER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:([+-]?\d+(?:\.\d+)?)\s*[x×*]\s*)?10\s*\^\s*\{?\s*([+-]?\d+)\s*\}?").unwrap());
static DECIMAL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^([+-]?)(\d+)(?:\.(\d+))?(?:[eE]([+-]?\d+))?").unwrap());

/// Parses model output in the `Scenario Type: ..., Key Performance Factors: ...` layout.
///
/// Text before the header is ignored. Items are separated by commas, newlines or
/// inline ` - ` bullets; a fragment without a colon continues the previous item,
/// so `10^-5 (TCP), 10^-4 (UDP)` stays one item yielding two KPIs.
pub fn parse_structured_intent(text: &str) -> Result<StructuredNetworkIntent> {
    let clean = clean(text);
    let header = HEADER
        .find(&clean)
        .ok_or_else(|| Error::SchemaViolation("missing \"Scenario Type\" header".into()))?;
    let body = &clean[header.end()..];

    let mut segments = segments(body).into_iter();
    let (_, first) = segments.next().unwrap_or_default();
    let (scenario, rest_of_first) = match KPF.find(&first) {
        Some(m) => (first[..m.start()].to_string(), Some(first[m.end()..].to_string())),
        None => (first.clone(), None),
    };
    let scenario = scenario.trim().trim_end_matches([',', '.']).trim().to_string();
    if scenario.is_empty() {
        return Err(Error::SchemaViolation("empty scenario type".into()));
    }

    let mut items: Vec<String> = Vec::new();
    let push = |sep: &str, seg: &str, items: &mut Vec<String>| {
        let seg = strip_bullet(seg.trim());
        let seg = match KPF.find(seg) {
            Some(m) if seg[..m.start()].trim().is_empty() => seg[m.end()..].trim(),
            _ => seg,
        };
        if seg.is_empty() {
            return;
        }
        if seg.contains(':') {
            items.push(seg.to_string());
        } else if let Some(last) = items.last_mut() {
            if looks_like_value(seg) {
                last.push_str(sep);
                last.push_str(seg);
            }
        }
    };
    if let Some(rest) = rest_of_first {
        push("", &rest, &mut items);
    }
    for (sep, seg) in segments {
        push(&sep, &seg, &mut items);
    }

    let mut kpis = Vec::new();
    let mut seen = HashSet::new();
    for item in &items {
        for kpi in parse_item(item)? {
            if !seen.insert((kpi.metric.clone(), kpi.qualifier.clone())) {
                return Err(Error::SchemaViolation(format!(
                    "duplicate KPI {}{}",
                    kpi.metric.wire_name(),
                    kpi.qualifier.as_deref().map(|q| format!(" ({q})")).unwrap_or_default()
                )));
            }
            kpis.push(kpi);
        }
    }
    if kpis.is_empty() {
        return Err(Error::SchemaViolation("no key performance factors".into()));
    }
    Ok(StructuredNetworkIntent {
        scenario_type: scenario,
        kpis,
        provenance: Vec::new(),
        raw_model_output: text.to_string(),
    })
}

pub(crate) fn clean(text: &str) -> String {
    text.replace('$', "")
        .replace("\\times", "×")
        .replace("\\leq", "≤")
        .replace("\\geq", "≥")
        .replace("\\le", "≤")
        .replace("\\ge", "≥")
        .replace("\\lt", "<")
        .replace("\\gt", ">")
        .replace(['\u{2212}', '\u{2013}'], "-")
        .replace("**", "")
}

/// Splits on newlines, sentence ends, `,` and ` - `, remembering each fragment's separator.
fn segments(body: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (li, line) in body.split('\n').enumerate() {
        let line_sep = if li == 0 { "" } else { " " };
        for (si, sentence) in line.split(". ").enumerate() {
            let sentence_sep = if si == 0 { line_sep } else { ". " };
            for (ci, part) in sentence.split(',').enumerate() {
                let comma_sep = if ci == 0 { sentence_sep } else { ", " };
                for (bi, piece) in part.split(" - ").enumerate() {
                    let sep = if bi == 0 { comma_sep } else { " - " };
                    out.push((sep.to_string(), piece.to_string()));
                }
            }
        }
    }
    out
}

fn strip_bullet(s: &str) -> &str {
    for b in ["- ", "* ", "• "] {
        if let Some(rest) = s.strip_prefix(b) {
            return rest.trim_start();
        }
    }
    s
}

fn looks_like_value(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_digit() || "+-<>=≤≥(".contains(c)) || s.to_lowercase().starts_with("rtt")
}

const DELAY_NAMES: [&str; 6] = ["delay", "latency", "network delay", "end-to-end delay", "e2e delay", "e2e latency"];

fn metric_from_name(name: &str) -> Metric {
    let lower = name.to_lowercase();
    let has = |needle: &str| lower.contains(needle);
    if has("throughput") || has("data rate") || has("bandwidth") {
        Metric::DownlinkThroughput
    } else if has("rtt") || has("round trip") || DELAY_NAMES.contains(&lower.trim()) {
        Metric::RttDelay
    } else if has("packet loss") || has("plr") {
        Metric::PacketLossRate
    } else if has("resolution") {
        Metric::Resolution
    } else if has("rsrp") {
        Metric::Rsrp
    } else if has("sinr") {
        Metric::Sinr
    } else {
        Metric::Other(name.trim().to_string())
    }
}

/// Splits `name (qual)` into the bare name and the qualifier.
fn split_qualifier(name: &str) -> (String, Option<String>) {
    let mut bare = String::new();
    let mut qual = None;
    let mut rest = name;
    while let Some(open) = rest.find('(') {
        let Some(close) = rest[open..].find(')').map(|c| c + open) else { break };
        bare.push_str(&rest[..open]);
        let q = rest[open + 1..close].trim();
        if !q.is_empty() {
            qual = Some(q.to_string());
        }
        rest = &rest[close + 1..];
    }
    bare.push_str(rest);
    (bare.split_whitespace().collect::<Vec<_>>().join(" "), qual)
}

/// Value groups: text before each parenthesised qualifier, plus any trailing text.
fn value_groups(value: &str) -> Vec<(String, Option<String>)> {
    let mut out = Vec::new();
    let mut pending: Option<String> = None;
    let mut rest = value;
    let tidy = |s: &str| s.trim().trim_matches(|c: char| c == ',' || c == ';').trim().trim_end_matches('.').to_string();
    while let Some(open) = rest.find('(') {
        let Some(close) = rest[open..].find(')').map(|c| c + open) else { break };
        let text = tidy(&rest[..open]);
        let q = rest[open + 1..close].trim().to_string();
        let q = (!q.is_empty()).then_some(q);
        if text.is_empty() {
            if let Some((_, last_q)) = out.last_mut().filter(|(_, lq): &&mut (String, Option<String>)| lq.is_none()) {
                *last_q = q;
            } else {
                pending = q;
            }
        } else {
            out.push((text, q.or(pending.take())));
        }
        rest = &rest[close + 1..];
    }
    let tail = tidy(rest);
    if !tail.is_empty() {
        out.push((tail, pending.take()));
    }
    out
}

fn parse_item(item: &str) -> Result<Vec<Kpi>> {
    let (name, value) = item.split_once(':').expect("items contain a colon");
    let (name, name_qual) = split_qualifier(name);
    if name.is_empty() {
        return Err(Error::SchemaViolation(format!("KPI without a name: {item:?}")));
    }
    let metric = metric_from_name(&name);
    let groups = value_groups(value);
    if groups.is_empty() {
        return Err(Error::SchemaViolation(format!("KPI {name:?} has no value")));
    }
    groups
        .into_iter()
        .map(|(text, qual)| {
            let qualifier = qual.or_else(|| name_qual.clone());
            parse_value(&metric, &text).map(|(comparator, value, unit)| Kpi {
                metric: metric.clone(),
                comparator,
                value,
                unit,
                qualifier,
            })
        })
        .collect()
}

fn parse_value(metric: &Metric, text: &str) -> Result<(Comparator, KpiValue, Unit)> {
    if *metric == Metric::Resolution {
        return Ok((Comparator::Eq, KpiValue::Label(text.to_string()), Unit::Label));
    }
    match parse_number(text) {
        Some(parsed) => Ok(parsed),
        None if matches!(metric, Metric::Other(_)) => Ok((Comparator::Eq, KpiValue::Label(text.to_string()), Unit::Label)),
        None => Err(Error::SchemaViolation(format!(
            "unparseable value {text:?} for {}",
            metric.wire_name()
        ))),
    }
}

fn parse_number(text: &str) -> Option<(Comparator, KpiValue, Unit)> {
    let mut s = RTT_PREFIX.replace(text.trim(), "").into_owned();
    let comparator = match COMPARATOR.captures(&s) {
        Some(c) => {
            let cmp = match &c[1] {
                "<" => Comparator::Lt,
                "<=" | "≤" => Comparator::Le,
                ">" => Comparator::Gt,
                ">=" | "≥" => Comparator::Ge,
                _ => Comparator::Eq,
            };
            s = s[c.get(0).unwrap().end()..].to_string();
            cmp
        }
        None => Comparator::Eq,
    };

    let (digits, shift, rest) = if let Some(c) = POWER.captures(&s) {
        let mantissa = c.get(1).map_or("1", |m| m.as_str()).to_string();
        let exp: i32 = c[2].parse().ok()?;
        (mantissa, exp, s[c.get(0).unwrap().end()..].to_string())
    } else {
        let c = DECIMAL.captures(&s)?;
        let exp: i32 = c.get(4).map_or(Some(0), |m| m.as_str().parse().ok())?;
        let mantissa = match c.get(3) {
            Some(f) => format!("{}{}.{}", &c[1], &c[2], f.as_str()),
            None => format!("{}{}", &c[1], &c[2]),
        };
        (mantissa, exp, s[c.get(0).unwrap().end()..].to_string())
    };

    let (unit, unit_shift) = match rest.trim() {
        "" => (Unit::Dimensionless, 0),
        "Mbps" | "Mb/s" | "mbps" => (Unit::Mbps, 0),
        "Gbps" | "Gb/s" | "gbps" => (Unit::Mbps, 3),
        "kbps" | "Kbps" | "kb/s" => (Unit::Mbps, -3),
        "ms" => (Unit::Ms, 0),
        "s" => (Unit::Ms, 3),
        "dBm" | "dbm" => (Unit::DBm, 0),
        "dB" | "db" => (Unit::DB, 0),
        "%" => (Unit::Dimensionless, -2),
        _ => return None,
    };
    let value = shifted(&digits, shift + unit_shift)?;
    Some((comparator, KpiValue::Number(value), unit))
}

/// `digits × 10^shift`, computed on the decimal string so `1.5 Gbps` is exactly 1500.
pub(crate) fn shifted(digits: &str, shift: i32) -> Option<f64> {
    let (sign, unsigned) = match digits.strip_prefix('-') {
        Some(r) => ("-", r),
        None => ("", digits.strip_prefix('+').unwrap_or(digits)),
    };
    let (int, frac) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    let all: String = format!("{int}{frac}");
    let point = int.len() as i64 + shift as i64;
    let literal = if point <= 0 {
        format!("{sign}0.{}{all}", "0".repeat((-point) as usize))
    } else if point as usize >= all.len() {
        format!("{sign}{all}{}", "0".repeat(point as usize - all.len()))
    } else {
        format!("{sign}{}.{}", &all[..point as usize], &all[point as usize..])
    };
    literal.parse().ok()
}
