mod common;

use common::props::{check_round_trip, intent};
use intent_rag::structuring::{
    parse_structured_intent, validate, Comparator, Kpi, Metric, StructuredNetworkIntent, Unit,
};
use intent_rag::Error;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_text_round_trips(sni in intent()) {
        check_round_trip(&sni)?;
    }

    #[test]
    fn generated_intents_validate(sni in intent()) {
        prop_assert!(validate(&sni).is_valid(), "{:?}", validate(&sni));
    }

    #[test]
    fn json_round_trips(sni in intent()) {
        let json = serde_json::to_string(&sni).unwrap();
        let back: StructuredNetworkIntent = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, sni);
    }
}

#[test]
fn missing_header_is_a_schema_violation() {
    let err = parse_structured_intent("Key Performance Factors: Data Rate/Throughput: 30 Mbps").unwrap_err();
    assert!(matches!(err, Error::SchemaViolation(_)), "{err}");
}

#[test]
fn zero_kpis_is_a_schema_violation() {
    for text in ["Scenario Type: 4K On Demand Video", "Scenario Type: 4K On Demand Video, Key Performance Factors:"] {
        let err = parse_structured_intent(text).unwrap_err();
        assert!(matches!(err, Error::SchemaViolation(_)), "{err}");
    }
}

#[test]
fn duplicate_metric_is_a_schema_violation() {
    let text = "Scenario Type: X, Key Performance Factors: Delay: RTT < 100 ms, Delay: RTT < 50 ms";
    let err = parse_structured_intent(text).unwrap_err();
    assert!(matches!(err, Error::SchemaViolation(_)), "{err}");
}

#[test]
fn json_keeps_every_float_bit() {
    let sni = StructuredNetworkIntent::new(
        "Aa",
        vec![Kpi::number(Metric::PacketLossRate, Comparator::Eq, 0.014199999999999999, Unit::Dimensionless)],
    );
    let back: StructuredNetworkIntent = serde_json::from_str(&serde_json::to_string(&sni).unwrap()).unwrap();
    assert_eq!(back, sni);
}
