use std::ffi::{c_char, CStr, CString};
use std::ptr;

use intent_rag_ffi::*;
use serde_json::Value;

const TABLE: &str = include_str!("../../core/tests/fixtures/kpi_table.md");
const VR: &str = "I want to play a virtual reality game without feeling motion sickness";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = irag_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

unsafe fn take(s: *mut c_char) -> Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
    irag_string_free(s);
    v
}

fn loaded() -> *mut IragGateway {
    let mut gw = ptr::null_mut();
    unsafe {
        assert_eq!(irag_gateway_new_mock(&mut gw), IragStatus::Ok);
        let mut nodes = 0usize;
        let status = irag_gateway_ingest_text(gw, c("kpi_table.md").as_ptr(), c(TABLE).as_ptr(), ptr::null(), &mut nodes);
        assert_eq!(status, IragStatus::Ok, "{:?}", last_error());
        assert_eq!(nodes, 2);
    }
    gw
}

#[test]
fn translate_through_the_abi() {
    let gw = loaded();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(irag_gateway_translate(gw, c(VR).as_ptr(), ptr::null(), &mut out), IragStatus::Ok);
        let v = take(out);
        assert_eq!(v["structured"]["scenario_type"], "3K Cloud VR (Game)");
        assert_eq!(v["structured"]["kpis"].as_array().unwrap().len(), 7);
        assert!(v["duration_seconds"].as_f64().unwrap() > 0.0);

        let mut out = ptr::null_mut();
        assert_eq!(irag_gateway_translate(gw, c(VR).as_ptr(), c("no_rag").as_ptr(), &mut out), IragStatus::Ok);
        assert!(take(out)["free_text"].is_object());

        let mut len = 0usize;
        assert_eq!(irag_gateway_catalog_len(gw, &mut len), IragStatus::Ok);
        assert_eq!(len, 3);
        irag_gateway_free(gw);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let gw = loaded();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(irag_gateway_translate(gw, c("qqqq zzzz").as_ptr(), ptr::null(), &mut out), IragStatus::Unresolvable);
        assert!(out.is_null());
        assert!(last_error().unwrap().starts_with("unresolvable_intent"));

        assert_eq!(irag_gateway_translate(gw, c(" ").as_ptr(), ptr::null(), &mut out), IragStatus::InvalidInput);
        assert_eq!(irag_gateway_translate(gw, c("x").as_ptr(), c("bogus").as_ptr(), &mut out), IragStatus::InvalidInput);
        assert_eq!(irag_gateway_translate(ptr::null(), c("x").as_ptr(), ptr::null(), &mut out), IragStatus::NullArgument);
        assert_eq!(irag_gateway_translate(gw, ptr::null(), ptr::null(), &mut out), IragStatus::NullArgument);
        assert_eq!(irag_gateway_translate(gw, c("x").as_ptr(), ptr::null(), ptr::null_mut()), IragStatus::NullArgument);

        let bad = [0xffu8 as c_char, 0];
        assert_eq!(irag_gateway_translate(gw, bad.as_ptr(), ptr::null(), &mut out), IragStatus::InvalidUtf8);

        let mut len = 0usize;
        assert_eq!(irag_gateway_catalog_len(gw, &mut len), IragStatus::Ok);
        assert_eq!(last_error(), None);
        irag_gateway_free(gw);
        irag_gateway_free(ptr::null_mut());
        irag_string_free(ptr::null_mut());
    }
}

#[test]
fn empty_engine_reports_empty_index() {
    let mut gw = ptr::null_mut();
    unsafe {
        assert_eq!(irag_gateway_new_mock(&mut gw), IragStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(irag_gateway_translate(gw, c("4K On Demand Video").as_ptr(), ptr::null(), &mut out), IragStatus::EmptyIndex);
        assert_eq!(irag_gateway_new_mock(ptr::null_mut()), IragStatus::NullArgument);
        irag_gateway_free(gw);
    }
}

#[test]
fn save_and_load_indices() {
    let dir = tempfile::tempdir().unwrap();
    let idx = c(dir.path().join("idx").to_str().unwrap());
    let gw = loaded();
    unsafe {
        assert_eq!(irag_gateway_save(gw, idx.as_ptr()), IragStatus::Ok);
        let mut fresh = ptr::null_mut();
        assert_eq!(irag_gateway_new_mock(&mut fresh), IragStatus::Ok);
        assert_eq!(irag_gateway_load(fresh, idx.as_ptr()), IragStatus::Ok, "{:?}", last_error());
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(irag_gateway_translate(gw, c(VR).as_ptr(), ptr::null(), &mut a), IragStatus::Ok);
        assert_eq!(irag_gateway_translate(fresh, c(VR).as_ptr(), ptr::null(), &mut b), IragStatus::Ok);
        let (mut a, mut b) = (take(a), take(b));
        a.as_object_mut().unwrap().remove("duration_seconds");
        b.as_object_mut().unwrap().remove("duration_seconds");
        assert_eq!(a, b);

        let missing = c(dir.path().join("missing").to_str().unwrap());
        assert_eq!(irag_gateway_load(fresh, missing.as_ptr()), IragStatus::IndexNotFound);
        irag_gateway_free(gw);
        irag_gateway_free(fresh);
    }
}

#[test]
fn open_with_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let gw = loaded();
    let idx = dir.path().join("idx");
    unsafe {
        assert_eq!(irag_gateway_save(gw, c(idx.to_str().unwrap()).as_ptr()), IragStatus::Ok);
        irag_gateway_free(gw);
        let cfg = dir.path().join("gw.toml");
        std::fs::write(&cfg, format!("index_dir = {:?}\n", idx.to_str().unwrap())).unwrap();
        let mut opened = ptr::null_mut();
        assert_eq!(irag_gateway_open(c(cfg.to_str().unwrap()).as_ptr(), &mut opened), IragStatus::Ok, "{:?}", last_error());
        let mut len = 0usize;
        assert_eq!(irag_gateway_catalog_len(opened, &mut len), IragStatus::Ok);
        assert_eq!(len, 3);
        irag_gateway_free(opened);
    }
}

#[test]
fn parse_through_the_abi() {
    unsafe {
        let mut out = ptr::null_mut();
        let text = c("Scenario Type: 3K Cloud VR (Game), Key Performance Factors: Packet Loss Rate: 10^-3 (TCP) 10^-2 (UDP)");
        assert_eq!(irag_parse_structured_intent(text.as_ptr(), &mut out), IragStatus::Ok);
        let v = take(out);
        assert_eq!(v["kpis"][1]["qualifier"], "UDP");
        assert_eq!(v["violations"], serde_json::json!([]));
        assert_eq!(irag_parse_structured_intent(c("Scenario Type: X").as_ptr(), &mut out), IragStatus::SchemaViolation);
        assert!(out.is_null());
        assert!(last_error().unwrap().contains("schema_violation"));
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(irag_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/intent_rag.h")).unwrap();
    for name in [
        "irag_gateway_new_mock",
        "irag_gateway_open",
        "irag_gateway_free",
        "irag_gateway_ingest_text",
        "irag_gateway_save",
        "irag_gateway_load",
        "irag_gateway_translate",
        "irag_gateway_catalog_len",
        "irag_parse_structured_intent",
        "irag_string_free",
        "irag_last_error_message",
        "irag_version",
        "typedef struct IragGateway IragGateway",
        "IRAG_STATUS_UNRESOLVABLE = 6",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
