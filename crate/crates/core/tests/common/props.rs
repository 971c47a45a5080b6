//! Strategies and checkers shared by the property tests and the acceptance run.

use std::collections::HashSet;

use intent_rag::corpus::{split_text, EmbeddedNode, Modality, ModalityChunk, Payload, VectorIndex};
use intent_rag::structuring::parse_structured_intent;
use intent_rag::structuring::{Comparator, Kpi, Metric, StructuredNetworkIntent, Unit};
use proptest::prelude::*;

pub fn text_chunk(content: String) -> ModalityChunk {
    ModalityChunk {
        id: "d#c0".into(),
        doc_id: "d".into(),
        modality: Modality::Text,
        byte_range: 0..content.len(),
        content,
        order_index: 0,
    }
}

pub fn words() -> impl Strategy<Value = String> {
    prop::collection::vec("[a-z0-9]{1,8}", 0..600).prop_map(|w| w.join(" "))
}

pub fn check_split(content: &str, max: usize, overlap: usize) -> Result<(), TestCaseError> {
    let chunk = text_chunk(content.to_string());
    let tokens: Vec<&str> = content.split_whitespace().collect();
    let total = tokens.len();
    let nodes = split_text(&chunk, max, overlap).unwrap();
    let stride = max - overlap;
    if total == 0 {
        prop_assert!(nodes.is_empty());
        return Ok(());
    }
    prop_assert_eq!(nodes[0].token_start, 0);
    prop_assert_eq!(nodes.last().unwrap().token_end, total);
    for (k, n) in nodes.iter().enumerate() {
        prop_assert_eq!(n.token_start, k * stride);
        prop_assert_eq!(n.token_end, (k * stride + max).min(total));
        prop_assert!(n.token_end > n.token_start);
        prop_assert_eq!(n.text.clone(), tokens[n.token_start..n.token_end].join(" "));
        prop_assert_eq!(n.parent_chunk_id.as_str(), "d#c0");
    }
    for pair in nodes.windows(2) {
        prop_assert_eq!(pair[0].token_end - pair[1].token_start, overlap);
    }
    prop_assert!(nodes.len() == 1 || nodes[nodes.len() - 2].token_end < total);
    Ok(())
}

pub const DIM: usize = 8;

pub fn brute_force(query: &[f32], vectors: &[Vec<f32>]) -> Vec<(usize, f64)> {
    let dot = |a: &[f32], b: &[f32]| a.iter().zip(b).map(|(x, y)| f64::from(*x) * f64::from(*y)).sum::<f64>();
    let qn = dot(query, query).sqrt();
    let mut scored: Vec<(usize, f64)> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let vn = dot(v, v).sqrt();
            let s = if qn == 0.0 || vn == 0.0 { 0.0 } else { dot(query, v) / (qn * vn) };
            (i, s)
        })
        .collect();
    // Stable sort keeps insertion order among equal scores.
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored
}

pub fn node(i: usize, vector: Vec<f32>) -> EmbeddedNode {
    EmbeddedNode {
        node_id: format!("n{i}"),
        vector,
        payload: Payload { original_text: format!("node {i}"), summary_text: None, modality: Modality::Text, doc_id: "d".into() },
    }
}

/// Small integer components so duplicates and scalar multiples produce exact ties.
pub fn vector() -> impl Strategy<Value = Vec<f32>> {
    prop::collection::vec((-2i8..=2).prop_map(f32::from), DIM)
}

pub fn corpus() -> impl Strategy<Value = Vec<Vec<f32>>> {
    prop::collection::vec(vector(), 1..=64).prop_flat_map(|base| {
        let n = base.len();
        // Re-insert copies of earlier vectors to force ties.
        prop::collection::vec((0..n, 1i8..=3), 0..=(64 - n).min(16)).prop_map(move |dups| {
            let mut all = base.clone();
            for (i, scale) in dups {
                all.push(base[i].iter().map(|x| x * f32::from(scale)).collect());
            }
            all
        })
    })
}

fn comparator() -> impl Strategy<Value = Comparator> {
    prop_oneof![
        Just(Comparator::Eq),
        Just(Comparator::Lt),
        Just(Comparator::Le),
        Just(Comparator::Gt),
        Just(Comparator::Ge),
    ]
}

/// `m * 10^-places`, parsed from its decimal spelling.
fn decimal(lo: i64, hi: i64, places: std::ops::Range<u32>) -> impl Strategy<Value = f64> {
    (lo..hi, places).prop_map(|(m, p)| format!("{m}e-{p}").parse::<f64>().unwrap())
}

fn qualifier() -> impl Strategy<Value = Option<String>> {
    prop::option::of(prop::sample::select(vec!["downlink", "uplink", "TCP", "UDP", "peak"]).prop_map(String::from))
}

fn kpi() -> impl Strategy<Value = Kpi> {
    let numeric = |metric: Metric, unit: Unit, value: BoxedStrategy<f64>| {
        (comparator(), value, qualifier()).prop_map(move |(c, v, q)| {
            let k = Kpi::number(metric.clone(), c, v, unit);
            match q {
                Some(q) => k.with_qualifier(q),
                None => k,
            }
        })
    };
    prop_oneof![
        numeric(Metric::DownlinkThroughput, Unit::Mbps, decimal(1, 100_000, 0..4).boxed()),
        numeric(Metric::RttDelay, Unit::Ms, decimal(1, 10_000, 0..3).boxed()),
        numeric(
            Metric::PacketLossRate,
            Unit::Dimensionless,
            prop_oneof![(1u32..9).prop_map(|k| format!("1e-{k}").parse().unwrap()), decimal(1, 1000, 3..7)].boxed(),
        ),
        numeric(Metric::Rsrp, Unit::DBm, decimal(-140_000, -40_000, 3..4).boxed()),
        numeric(Metric::Sinr, Unit::DB, decimal(-200, 400, 1..2).boxed()),
        prop::sample::select(vec!["3K", "4K", "8K", "1080p"]).prop_map(|l| Kpi::label(Metric::Resolution, l)),
        (prop::sample::select(vec!["Frame Rate", "Jitter", "Availability"]), 1u32..240)
            .prop_map(|(name, v)| Kpi::number(Metric::Other(name.into()), Comparator::Ge, f64::from(v), Unit::Dimensionless)),
    ]
}

fn scenario() -> impl Strategy<Value = String> {
    (prop::collection::vec("[A-Z][a-z]{1,7}|[0-9]K", 1..4), prop::option::of(prop::sample::select(vec!["(Game)", "(on demand)"])))
        .prop_map(|(words, tail)| {
            let mut s = words.join(" ");
            if let Some(t) = tail {
                s.push(' ');
                s.push_str(t);
            }
            s
        })
}

pub fn intent() -> impl Strategy<Value = StructuredNetworkIntent> {
    (scenario(), prop::collection::vec(kpi(), 1..10)).prop_map(|(s, kpis)| {
        let mut seen = HashSet::new();
        let kpis = kpis.into_iter().filter(|k| seen.insert((k.metric.clone(), k.qualifier.clone()))).collect();
        StructuredNetworkIntent::new(s, kpis)
    })
}

/// Index top-`k` must equal the brute-force ranking, scores bit for bit.
pub fn check_ranking(vectors: &[Vec<f32>], query: &[f32], k: usize) -> Result<(), TestCaseError> {
    let mut idx = VectorIndex::new(DIM);
    idx.upsert(vectors.iter().cloned().enumerate().map(|(i, v)| node(i, v)).collect()).unwrap();
    let got = idx.query(query, k).unwrap();
    let want = brute_force(query, vectors);
    prop_assert_eq!(got.len(), k.min(vectors.len()));
    for (hit, (i, score)) in got.iter().zip(&want) {
        prop_assert_eq!(&hit.node_id, &format!("n{i}"));
        prop_assert_eq!(hit.position, *i);
        prop_assert_eq!(hit.score.to_bits(), score.to_bits());
    }
    Ok(())
}

/// Canonical text parses back to the same intent and re-serializes identically.
pub fn check_round_trip(sni: &StructuredNetworkIntent) -> Result<(), TestCaseError> {
    let text = sni.to_canonical();
    let back = parse_structured_intent(&text).map_err(|e| TestCaseError::fail(format!("{e}: {text}")))?;
    prop_assert!(back.same_content(sni), "{}\n{}", text, back);
    prop_assert_eq!(back.to_canonical(), text);
    Ok(())
}
