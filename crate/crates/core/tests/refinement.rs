mod common;

use common::*;
use intent_rag::corpus::{KnowledgeBase, VectorIndex};
use intent_rag::model::{ModelKind, Models};
use intent_rag::refinement::*;
use intent_rag::Error;
use proptest::prelude::*;

fn kpi_table_catalog(models: &Models) -> ScenarioCatalog {
    let kb = KnowledgeBase::new(VectorIndex::new(256));
    kb.ingest(&[kpi_table_doc()], models, 128, 10).unwrap();
    build_catalog(&kb.snapshot(), &DomainInstruction::default(), models, 16).unwrap()
}

fn fixture_catalog() -> ScenarioCatalog {
    let models = Models::mock();
    let kb = KnowledgeBase::new(VectorIndex::new(256));
    kb.ingest(&fixture_docs(), &models, 128, 10).unwrap();
    build_catalog(&kb.snapshot(), &DomainInstruction::default(), &models, 16).unwrap()
}

#[test]
fn catalog_lists_table_rows_in_document_order() {
    let catalog = kpi_table_catalog(&Models::mock());
    assert_eq!(catalog.names(), ["4K On Demand Video", "3K Cloud VR (Game)", "Airplanes connectivity"]);
}

#[test]
fn catalog_needs_a_populated_index() {
    let err = build_catalog(&VectorIndex::new(256), &DomainInstruction::default(), &Models::mock(), 16);
    assert!(matches!(err, Err(Error::EmptyIndex)));
}

#[test]
fn reference_intents_classify() {
    let models = Models::mock();
    let catalog = fixture_catalog();
    for (intent, want) in [
        (VR_INTENT, "3K Cloud VR (Game)"),
        ("4K On Demand Video", "4K On Demand Video"),
        (PLANE_INTENT, "Airplanes connectivity"),
    ] {
        let wdi = refine(&IntentText::new(intent).unwrap(), &catalog, &models).unwrap();
        assert_eq!(wdi.scenario_type, want, "{intent}");
        assert_eq!(wdi.original_intent.as_str(), intent);
    }
}

#[test]
fn refinement_uses_the_reasoning_profile() {
    let (models, rec) = recording_models();
    let catalog = kpi_table_catalog(&models);
    rec.take();
    refine(&IntentText::new(VR_INTENT).unwrap(), &catalog, &models).unwrap();
    let reqs = rec.take();
    assert_eq!(reqs.len(), 1);
    assert_eq!(reqs[0].profile.kind, ModelKind::Reasoning);
    let p = &reqs[0].prompt;
    let list = &p[p.find("list [").unwrap() + 6..p.find("]. Some examples").unwrap()];
    assert_eq!(list, catalog.names().join("; "));
    for name in catalog.names() {
        assert_eq!(list.matches(name.as_str()).count(), 1, "{name}");
    }
}

#[test]
fn prompt_carries_both_examples_and_the_closing_instruction() {
    let catalog = fixture_catalog();
    let p = assemble_refinement_prompt(&IntentText::new("anything").unwrap(), &catalog);
    assert!(p.contains("intent: 4K On Demand Video"));
    assert!(p.contains("intent: I want internet access with fast browsing service in the airoplane"));
    assert!(p.contains("Do not put any introductory phrases"));
    let p = assemble_refinement_prompt(&IntentText::new("give me {catalog} now").unwrap(), &catalog);
    assert!(p.contains("\"give me {catalog} now\""));
}

#[test]
fn gibberish_is_unresolvable() {
    let err = refine(&IntentText::new("qqqq zzzz").unwrap(), &fixture_catalog(), &Models::mock());
    assert!(matches!(err, Err(Error::UnresolvableIntent { .. })), "{err:?}");
}

#[test]
fn catalog_names_classify_to_themselves() {
    let models = Models::mock();
    let catalog = fixture_catalog();
    for name in catalog.names() {
        let wdi = refine(&IntentText::new(name.as_str()).unwrap(), &catalog, &models).unwrap();
        assert_eq!(&wdi.scenario_type, name);
    }
}

fn intent_text() -> impl Strategy<Value = String> {
    let vocab = prop::sample::select(vec![
        "I", "want", "to", "watch", "4K", "video", "on", "demand", "play", "a", "VR", "game", "cloud",
        "virtual", "reality", "internet", "in", "the", "airplane", "plane", "fast", "browsing", "3K",
        "streaming", "qqqq", "zz", "motion", "sickness",
    ]);
    prop::collection::vec(vocab, 1..12).prop_map(|w| w.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn refinement_is_closed_and_idempotent(text in intent_text()) {
        let models = Models::mock();
        let catalog = fixture_catalog();
        match refine(&IntentText::new(text).unwrap(), &catalog, &models) {
            Ok(wdi) => {
                prop_assert!(catalog.names().contains(&wdi.scenario_type));
                let again = refine(&IntentText::new(wdi.scenario_type.clone()).unwrap(), &catalog, &models).unwrap();
                prop_assert_eq!(again.scenario_type, wdi.scenario_type);
            }
            Err(e) => prop_assert!(matches!(e, Error::UnresolvableIntent { .. }), "{e}"),
        }
    }
}
