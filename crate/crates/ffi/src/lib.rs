//! C ABI for the intent translation engine.
//!
//! Every entry point returns an [`IragStatus`]. On failure a message is kept
//! per thread and can be read with [`irag_last_error_message`]. Strings handed
//! out by the library must be released with [`irag_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use intent_rag::baselines::PipelineKind;
use intent_rag::corpus::{FormatHint, RawDocument};
use intent_rag::refinement::IntentText;
use intent_rag::service::{GatewayConfig, TranslationEngine};
use intent_rag::structuring::{intent_json, parse_structured_intent, validate};
use intent_rag::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IragStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    EmptyIndex = 4,
    IndexNotFound = 5,
    Unresolvable = 6,
    SchemaViolation = 7,
    ModelError = 8,
    IoError = 9,
    Internal = 10,
    Panic = 11,
}

impl From<&Error> for IragStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::BadParams(_)
            | Error::EmptyDocument
            | Error::UnsupportedModality(_) => IragStatus::InvalidInput,
            Error::EmptyIndex | Error::EmptyCatalog => IragStatus::EmptyIndex,
            Error::IndexNotFound(_) => IragStatus::IndexNotFound,
            Error::UnresolvableIntent { .. } => IragStatus::Unresolvable,
            Error::SchemaViolation(_) => IragStatus::SchemaViolation,
            Error::Model(_) => IragStatus::ModelError,
            Error::Io(_) | Error::CorruptIndex(_) => IragStatus::IoError,
            _ => IragStatus::Internal,
        }
    }
}

/// Opaque engine handle.
pub struct IragGateway {
    engine: TranslationEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(IragStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(IragStatus::from(&e), format!("{}: {e}", e.code()))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IragStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IragStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            IragStatus::Panic
        }
    }
}

unsafe fn arg_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(IragStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(IragStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn opt_str<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        arg_str(p, name).map(Some)
    }
}

unsafe fn gateway<'a>(p: *const IragGateway) -> Result<&'a IragGateway, Failure> {
    p.as_ref().ok_or_else(|| Failure(IragStatus::NullArgument, "gateway is null".into()))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(IragStatus::NullArgument, format!("{name} is null")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(IragStatus::Internal, "output contains a NUL byte".into()))
}

fn boxed(engine: TranslationEngine, out: &mut *mut IragGateway) {
    *out = Box::into_raw(Box::new(IragGateway { engine }));
}

/// Create an engine with the mock backend and empty indices.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_new_mock(out: *mut *mut IragGateway) -> IragStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        boxed(TranslationEngine::from_config(GatewayConfig::default())?, out);
        Ok(())
    })
}

/// Create an engine from a TOML configuration file and load its indices.
/// A null `config_path` uses defaults plus environment overrides.
///
/// # Safety
/// `config_path` is null or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_open(config_path: *const c_char, out: *mut *mut IragGateway) -> IragStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let path = opt_str(config_path, "config_path")?.map(Path::new);
        let config = GatewayConfig::load(path)?;
        boxed(TranslationEngine::open(config)?, out);
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `gw` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_free(gw: *mut IragGateway) {
    if !gw.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(gw))));
    }
}

/// Ingest one document into both indices. `format_hint` may be null
/// (markdown-like). `out_nodes`, when non-null, receives the node count.
///
/// # Safety
/// String arguments are NUL-terminated; `gw` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_ingest_text(
    gw: *mut IragGateway,
    doc_id: *const c_char,
    text: *const c_char,
    format_hint: *const c_char,
    out_nodes: *mut usize,
) -> IragStatus {
    guard(|| {
        let gw = gateway(gw)?;
        let id = arg_str(doc_id, "doc_id")?;
        let text = arg_str(text, "text")?;
        let hint = match opt_str(format_hint, "format_hint")? {
            Some(h) => h.parse::<FormatHint>()?,
            None => FormatHint::MarkdownLike,
        };
        let report = gw.engine.ingest(&[RawDocument::new(id, text, hint)])?;
        if let Some(n) = out_nodes.as_mut() {
            *n = report.nodes_indexed;
        }
        Ok(())
    })
}

/// Write both indices under `dir`.
///
/// # Safety
/// `dir` is NUL-terminated; `gw` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_save(gw: *const IragGateway, dir: *const c_char) -> IragStatus {
    guard(|| {
        let gw = gateway(gw)?;
        gw.engine.save(Path::new(arg_str(dir, "dir")?))?;
        Ok(())
    })
}

/// Replace both indices with the ones stored under `dir`.
///
/// # Safety
/// `dir` is NUL-terminated; `gw` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_load(gw: *mut IragGateway, dir: *const c_char) -> IragStatus {
    guard(|| {
        let dir = arg_str(dir, "dir")?;
        let gw = gw.as_mut().ok_or_else(|| Failure(IragStatus::NullArgument, "gateway is null".into()))?;
        let config = GatewayConfig { index_dir: dir.into(), ..gw.engine.config().clone() };
        gw.engine = TranslationEngine::open_with(config, gw.engine.models().clone())?;
        Ok(())
    })
}

/// Translate an intent. `pipeline` is `intent_rag` (when null),
/// `vanilla_rag` or `no_rag`. On success `*out_json` owns the response JSON.
///
/// # Safety
/// String arguments are NUL-terminated; `gw` is a live handle; `out_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_translate(
    gw: *const IragGateway,
    intent: *const c_char,
    pipeline: *const c_char,
    out_json: *mut *mut c_char,
) -> IragStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = ptr::null_mut();
        let gw = gateway(gw)?;
        let intent = IntentText::new(arg_str(intent, "intent")?)?;
        let pipeline: PipelineKind = opt_str(pipeline, "pipeline")?.unwrap_or("intent_rag").parse()?;
        let t = gw.engine.translate(pipeline, &intent)?;
        let mut v = t.to_json();
        v["duration_seconds"] = t.duration_seconds.into();
        *out = into_c_string(v.to_string())?;
        Ok(())
    })
}

/// Number of scenarios the engine can classify into.
///
/// # Safety
/// `gw` is a live handle; `out_len` is writable.
#[no_mangle]
pub unsafe extern "C" fn irag_gateway_catalog_len(gw: *const IragGateway, out_len: *mut usize) -> IragStatus {
    guard(|| {
        let out = out_ptr(out_len, "out_len")?;
        *out = gateway(gw)?.engine.catalog()?.len();
        Ok(())
    })
}

/// Parse model text into structured-intent JSON
/// (`scenario_type`, `kpis`, `provenance`, `violations`).
///
/// # Safety
/// `text` is NUL-terminated; `out_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn irag_parse_structured_intent(text: *const c_char, out_json: *mut *mut c_char) -> IragStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = ptr::null_mut();
        let sni = parse_structured_intent(arg_str(text, "text")?)?;
        *out = into_c_string(intent_json(&sni, &validate(&sni)).to_string())?;
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn irag_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn irag_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn irag_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
