//! HTTP client for chat-completion and embedding endpoints using the de-facto
//! industry JSON schema.
//!
//! * `POST {base}/chat/completions` with `{model, messages, temperature, max_tokens}`
//! * `POST {base}/completions` with `{model, prompt, temperature, max_tokens}` for
//!   `*-instruct` models
//! * `POST {base}/embeddings` with `{model, input}`

use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{normalize, ChatModel, ChatRequest, ChatResponse, Embedder, ModelError};

pub const ENV_API_BASE: &str = "GATEWAY_API_BASE";
pub const ENV_API_KEY: &str = "GATEWAY_API_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RemoteConfig {
    pub api_base: String,
    pub api_key: Option<String>,
    pub timeout_seconds: f64,
    pub max_in_flight: usize,
    pub embedding_dimension: usize,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            api_base: "https://api.openai.com/v1".into(),
            api_key: None,
            timeout_seconds: 60.0,
            max_in_flight: 8,
            embedding_dimension: 1536,
        }
    }
}

impl RemoteConfig {
    /// Overlay `GATEWAY_API_BASE` / `GATEWAY_API_KEY` when set.
    pub fn apply_env(&mut self) {
        if let Ok(base) = std::env::var(ENV_API_BASE) {
            if !base.is_empty() {
                self.api_base = base;
            }
        }
        if let Ok(key) = std::env::var(ENV_API_KEY) {
            if !key.is_empty() {
                self.api_key = Some(key);
            }
        }
    }

    fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_seconds.max(0.001))
    }
}

/// Counting gate capping concurrent in-flight requests.
#[derive(Debug)]
struct InFlight {
    cap: usize,
    used: Mutex<usize>,
    freed: Condvar,
}

struct Permit<'a>(&'a InFlight);

impl InFlight {
    fn new(cap: usize) -> Self {
        Self { cap: cap.max(1), used: Mutex::new(0), freed: Condvar::new() }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut used = self.used.lock().unwrap_or_else(|e| e.into_inner());
        while *used >= self.cap {
            used = self.freed.wait(used).unwrap_or_else(|e| e.into_inner());
        }
        *used += 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let mut used = self.0.used.lock().unwrap_or_else(|e| e.into_inner());
        *used -= 1;
        self.0.freed.notify_one();
    }
}

#[derive(Debug)]
struct Http {
    config: RemoteConfig,
    client: reqwest::blocking::Client,
    gate: InFlight,
}

impl Http {
    fn new(config: RemoteConfig) -> Result<Self, ModelError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout())
            .build()
            .map_err(|e| ModelError::Transport(e.to_string()))?;
        let gate = InFlight::new(config.max_in_flight);
        Ok(Self { config, client, gate })
    }

    fn post(&self, path: &str, body: &Value) -> Result<Value, ModelError> {
        let _permit = self.gate.acquire();
        let url = format!("{}/{}", self.config.api_base.trim_end_matches('/'), path);
        let mut req = self.client.post(url).json(body);
        if let Some(key) = &self.config.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| {
            if e.is_timeout() {
                ModelError::Timeout(self.config.timeout())
            } else {
                ModelError::Transport(e.to_string())
            }
        })?;
        let status = resp.status();
        let text = resp.text().map_err(|e| ModelError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(ModelError::Status { status: status.as_u16(), body: text });
        }
        serde_json::from_str(&text).map_err(|e| ModelError::Decode(e.to_string()))
    }
}

#[derive(Debug)]
pub struct RemoteChat {
    http: Http,
}

impl RemoteChat {
    pub fn new(config: RemoteConfig) -> Result<Self, ModelError> {
        Ok(Self { http: Http::new(config)? })
    }
}

fn uses_completions_endpoint(model: &str) -> bool {
    model.ends_with("-instruct")
}

fn completion_text(value: &Value) -> Option<&str> {
    let choice = value.get("choices")?.get(0)?;
    choice
        .get("message")
        .and_then(|m| m.get("content"))
        .and_then(Value::as_str)
        .or_else(|| choice.get("text").and_then(Value::as_str))
}

impl ChatModel for RemoteChat {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, ModelError> {
        req.check()?;
        let model = &req.profile.name;
        let (path, body) = if uses_completions_endpoint(model) {
            (
                "completions",
                json!({
                    "model": model,
                    "prompt": req.prompt,
                    "temperature": req.temperature,
                    "max_tokens": req.max_output_tokens,
                }),
            )
        } else {
            (
                "chat/completions",
                json!({
                    "model": model,
                    "messages": [{"role": "user", "content": req.prompt}],
                    "temperature": req.temperature,
                    "max_tokens": req.max_output_tokens,
                }),
            )
        };
        let started = Instant::now();
        let value = self.http.post(path, &body)?;
        let latency_seconds = started.elapsed().as_secs_f64();
        let text = completion_text(&value)
            .ok_or_else(|| ModelError::Decode("response has no choices[0] text".into()))?
            .to_string();
        let model_name = value.get("model").and_then(Value::as_str).unwrap_or(model).to_string();
        Ok(ChatResponse { text, model_name, latency_seconds })
    }
}

#[derive(Debug)]
pub struct RemoteEmbedder {
    http: Http,
    model: String,
}

impl RemoteEmbedder {
    pub fn new(config: RemoteConfig, model: String) -> Result<Self, ModelError> {
        Ok(Self { http: Http::new(config)?, model })
    }
}

impl Embedder for RemoteEmbedder {
    fn dimension(&self) -> usize {
        self.http.config.embedding_dimension
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, ModelError> {
        let dim = self.dimension();
        let mut out = vec![None; texts.len()];
        let (blank, wanted): (Vec<_>, Vec<_>) =
            texts.iter().enumerate().partition(|(_, t)| t.trim().is_empty());
        for (i, _) in blank {
            out[i] = Some(vec![0f32; dim]);
        }
        if !wanted.is_empty() {
            let input: Vec<&str> = wanted.iter().map(|(_, t)| **t).collect();
            let value = self.http.post("embeddings", &json!({"model": self.model, "input": input}))?;
            let data = value
                .get("data")
                .and_then(Value::as_array)
                .ok_or_else(|| ModelError::Decode("response has no data array".into()))?;
            if data.len() != wanted.len() {
                return Err(ModelError::Decode(format!(
                    "expected {} embeddings, got {}",
                    wanted.len(),
                    data.len()
                )));
            }
            for (pos, item) in data.iter().enumerate() {
                let slot = item.get("index").and_then(Value::as_u64).map_or(pos, |i| i as usize);
                let (orig, _) = *wanted
                    .get(slot)
                    .ok_or_else(|| ModelError::Decode(format!("embedding index {slot} out of range")))?;
                let mut v: Vec<f32> = item
                    .get("embedding")
                    .and_then(Value::as_array)
                    .ok_or_else(|| ModelError::Decode("embedding is not an array".into()))?
                    .iter()
                    .map(|x| x.as_f64().map(|f| f as f32))
                    .collect::<Option<_>>()
                    .ok_or_else(|| ModelError::Decode("embedding has non-numeric entries".into()))?;
                if v.len() != dim {
                    return Err(ModelError::Decode(format!(
                        "embedding dimension {} != configured {dim}",
                        v.len()
                    )));
                }
                normalize(&mut v);
                out[orig] = Some(v);
            }
        }
        out.into_iter()
            .map(|v| v.ok_or_else(|| ModelError::Decode("missing embedding in response".into())))
            .collect()
    }
}
