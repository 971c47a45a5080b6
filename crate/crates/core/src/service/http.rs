use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::Semaphore;

use super::TranslationEngine;
use crate::baselines::PipelineKind;
use crate::corpus::RawDocument;
use crate::error::Error;
use crate::eval::{DatasetRecord, EvalItem};
use crate::refinement::IntentText;

pub const DURATION_HEADER: &str = "x-translation-duration-seconds";

#[derive(Clone)]
pub struct AppState {
    engine: Arc<TranslationEngine>,
    permits: Arc<Semaphore>,
}

impl AppState {
    pub fn new(engine: Arc<TranslationEngine>) -> Self {
        let permits = Arc::new(Semaphore::new(engine.config().server.max_concurrent));
        Self { engine, permits }
    }
}

pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        Self(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self(Error::InvalidInput(e.body_text()))
    }
}

pub fn status_for(error: &Error) -> StatusCode {
    match error {
        Error::InvalidInput(_) | Error::BadParams(_) | Error::EmptyDocument | Error::UnsupportedModality(_) => {
            StatusCode::BAD_REQUEST
        }
        Error::UnresolvableIntent { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        Error::EmptyIndex | Error::EmptyCatalog | Error::IndexNotFound(_) => StatusCode::CONFLICT,
        Error::Model(_) | Error::SchemaViolation(_) => StatusCode::BAD_GATEWAY,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": {"code": self.0.code(), "message": self.0.to_string()}});
        (status_for(&self.0), Json(body)).into_response()
    }
}

async fn blocking<T, F>(state: &AppState, f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce(&TranslationEngine) -> crate::Result<T> + Send + 'static,
{
    let _permit = state.permits.clone().acquire_owned().await.expect("semaphore never closes");
    let engine = state.engine.clone();
    tokio::task::spawn_blocking(move || f(&engine))
        .await
        .map_err(|e| ApiError(Error::InvalidInput(format!("worker failed: {e}"))))?
        .map_err(ApiError)
}

#[derive(Deserialize)]
struct TranslateBody {
    intent: String,
}

#[derive(Deserialize)]
struct TranslateQuery {
    pipeline: Option<String>,
}

async fn translate(
    State(state): State<AppState>,
    Query(q): Query<TranslateQuery>,
    body: Result<Json<TranslateBody>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(body) = body?;
    let pipeline: PipelineKind = q.pipeline.as_deref().unwrap_or("intent_rag").parse()?;
    let intent = IntentText::new(body.intent)?;
    let t = blocking(&state, move |e| e.translate(pipeline, &intent)).await?;
    let mut resp = Json(t.to_json()).into_response();
    if let Ok(v) = HeaderValue::from_str(&format!("{:.6}", t.duration_seconds)) {
        resp.headers_mut().insert(DURATION_HEADER, v);
    }
    Ok(resp)
}

#[derive(Deserialize)]
struct IngestBody {
    documents: Vec<RawDocument>,
}

async fn ingest(State(state): State<AppState>, body: Result<Json<IngestBody>, JsonRejection>) -> Result<Json<Value>, ApiError> {
    let Json(body) = body?;
    if body.documents.is_empty() {
        return Err(Error::InvalidInput("no documents".into()).into());
    }
    let report = blocking(&state, move |e| {
        let report = e.ingest(&body.documents)?;
        if e.config().server.persist_ingest {
            e.save(&e.config().index_dir)?;
        }
        Ok(report)
    })
    .await?;
    Ok(Json(serde_json::to_value(report).expect("report serializes")))
}

async fn catalog(State(state): State<AppState>) -> Result<Json<Value>, ApiError> {
    let (names, version) = blocking(&state, |e| Ok((e.catalog()?.names().to_vec(), e.intent_index().version()))).await?;
    Ok(Json(json!({"names": names, "index_version": version})))
}

#[derive(Deserialize)]
struct EvalBody {
    dataset: Vec<DatasetRecord>,
    #[serde(default)]
    pipelines: Option<Vec<PipelineKind>>,
}

async fn eval_run(State(state): State<AppState>, body: Result<Json<EvalBody>, JsonRejection>) -> Result<Json<Value>, ApiError> {
    let Json(body) = body?;
    let items = body
        .dataset
        .iter()
        .enumerate()
        .map(|(i, r)| EvalItem::from_record(r).map_err(|e| Error::InvalidInput(format!("dataset record {}: {e}", i + 1))))
        .collect::<crate::Result<Vec<_>>>()?;
    let pipelines = body.pipelines.unwrap_or_else(|| PipelineKind::ALL.to_vec());
    let report = blocking(&state, move |e| e.evaluate(&items, &pipelines)).await?;
    Ok(Json(serde_json::to_value(report).expect("report serializes")))
}

async fn healthz(State(state): State<AppState>) -> Json<Value> {
    let intent = state.engine.intent_index();
    Json(json!({
        "status": "ok",
        "intent_nodes": intent.len(),
        "vanilla_nodes": state.engine.vanilla_index().len(),
        "index_version": intent.version(),
    }))
}

pub fn router(engine: Arc<TranslationEngine>) -> Router {
    Router::new()
        .route("/v1/knowledge:ingest", post(ingest))
        .route("/v1/intents:translate", post(translate))
        .route("/v1/catalog", get(catalog))
        .route("/v1/eval:run", post(eval_run))
        .route("/healthz", get(healthz))
        .with_state(AppState::new(engine))
}

/// Serves until Ctrl-C, letting in-flight requests finish.
pub async fn serve(engine: Arc<TranslationEngine>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(engine))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        })
        .await
}
