mod common;

use common::props::{check_split, text_chunk, words};

use intent_rag::corpus::*;
use intent_rag::model::{cosine, Embedder, Models, TrigramEmbedder};
use intent_rag::Error;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn splitter_default_params(content in words()) {
        check_split(&content, DEFAULT_MAX_TOKENS, DEFAULT_OVERLAP)?;
    }

    #[test]
    fn splitter_random_params(content in words(), max in 1usize..200, frac in 0.0f64..1.0) {
        let overlap = ((max as f64) * frac) as usize;
        prop_assume!(overlap < max);
        check_split(&content, max, overlap)?;
    }
}

#[test]
fn splitter_examples() {
    let text = |n: usize| (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ");
    let nodes = split_text(&text_chunk(text(100)), 128, 10).unwrap();
    assert_eq!(nodes.iter().map(|n| (n.token_start, n.token_end)).collect::<Vec<_>>(), [(0, 100)]);
    let nodes = split_text(&text_chunk(text(246)), 128, 10).unwrap();
    assert_eq!(nodes.iter().map(|n| (n.token_start, n.token_end)).collect::<Vec<_>>(), [(0, 128), (118, 246)]);
}

fn line() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => "[A-Za-z ?.!]{0,30}",
        2 => ("[a-z]{1,5}", "[a-z0-9]{1,5}").prop_map(|(a, b)| format!("| {a} | {b} |")),
        1 => "[a-z]{1,6}".prop_map(|a| format!("![{a}]({a}.png)")),
        1 => Just(String::new()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn loader_chunks_tile_the_document(lines in prop::collection::vec(line(), 1..30)) {
        let text = lines.join("\n");
        prop_assume!(!text.trim().is_empty());
        let doc = RawDocument::new("d", text.clone(), FormatHint::MarkdownLike);
        let chunks = load_document(&doc).unwrap();
        let mut at = 0;
        for (i, c) in chunks.iter().enumerate() {
            prop_assert_eq!(c.order_index, i);
            prop_assert_eq!(c.byte_range.start, at);
            prop_assert!(!c.content.trim().is_empty());
            at = c.byte_range.end;
        }
        prop_assert_eq!(at, text.len());
    }

    #[test]
    fn persistence_round_trip(texts in prop::collection::vec("[a-zA-Z0-9 |.]{0,40}", 1..20), version_bumps in 0usize..3) {
        let e = TrigramEmbedder::default();
        let mut idx = VectorIndex::new(e.dimension());
        for round in 0..=version_bumps {
            let inputs = texts.iter().enumerate().map(|(i, t)| IndexInput {
                node_id: format!("n{i}"),
                original_text: format!("{t} r{round}"),
                summary_text: (i % 2 == 0).then(|| t.clone()),
                modality: if i % 3 == 0 { Modality::Table } else { Modality::Text },
                doc_id: format!("d{}", i % 4),
            }).collect();
            idx.embed_and_index(inputs, &e).unwrap();
        }
        let back = decode_index(&encode_index(&idx)).unwrap();
        prop_assert_eq!(back, idx);
    }

    #[test]
    fn mock_vectors_are_unit_or_zero(text in "\\PC{0,60}") {
        let v = TrigramEmbedder::default().vector(&text);
        let norm: f64 = v.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
        if text.trim().is_empty() {
            prop_assert_eq!(norm, 0.0);
        } else {
            prop_assert!((norm - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn fixture_ingestion_separates_modalities() {
    let docs = common::fixture_docs();
    let chunks = load_document(&docs[0]).unwrap();
    let kinds: Vec<Modality> = chunks.iter().map(|c| c.modality).collect();
    assert_eq!(kinds, [Modality::Text, Modality::Table, Modality::Text, Modality::Table, Modality::Text]);
    assert!(chunks[3].content.contains("3K Cloud VR (Game) | 100 Mbps | RTT < 25 ms"));

    let mut idx = VectorIndex::new(256);
    let report = ingest_documents(&docs, &Models::mock(), 128, 10, &mut idx).unwrap();
    assert_eq!((report.text_chunks, report.table_chunks, report.nodes_indexed), (3, 2, 5));
    let table = idx.get("service_requirements.md#c3").unwrap();
    assert_eq!(
        table.payload.summary_text.as_deref(),
        Some("4K On Demand Video, 3K Cloud VR (Game), Airplanes connectivity")
    );
    assert!(table.payload.original_text.contains("-113 dBm"));
}

#[test]
fn persisted_fixture_index_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let mut idx = VectorIndex::new(256);
    ingest_documents(&common::fixture_docs(), &Models::mock(), 128, 10, &mut idx).unwrap();
    let path = dir.path().join("intent.idx");
    persist_index(&idx, &path).unwrap();
    assert_eq!(load_index(&path).unwrap(), idx);
    assert!(matches!(load_index(&dir.path().join("missing.idx")), Err(Error::IndexNotFound(_))));
    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    assert!(matches!(decode_index(&bytes), Err(Error::CorruptIndex(_))));
}

#[test]
fn reingesting_a_document_replaces_its_nodes() {
    let kb = KnowledgeBase::new(VectorIndex::new(256));
    let models = Models::mock();
    let docs = common::fixture_docs();
    kb.ingest(&docs, &models, 128, 10).unwrap();
    let before = kb.snapshot();
    kb.ingest(&docs, &models, 128, 10).unwrap();
    let after = kb.snapshot();
    assert_eq!(before.len(), after.len());
    assert!(after.version() > before.version());
    assert_eq!(before.entries()[0].node_id, "service_requirements.md#c0#n0");
    let q = models.embedder.embed_one("4K On Demand Video").unwrap();
    assert!(cosine(&q, &after.entries()[0].vector) > 0.0);
}
