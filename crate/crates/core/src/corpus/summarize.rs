use serde::{Deserialize, Serialize};

use super::{Modality, ModalityChunk};
use crate::model::{ModelError, ModelKind, Models};
use crate::prompts::{render, TABLE_SUMMARY, TEXT_SUMMARY};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub chunk_id: String,
    pub title: String,
    pub body: String,
}

fn strip_label<'a>(line: &'a str, label: &str) -> Option<&'a str> {
    let t = line.trim_start();
    let head = t.get(..label.len())?;
    head.eq_ignore_ascii_case(label).then(|| t[label.len()..].trim())
}

/// Split a model reply into an optional `Title:` line and the body.
fn parse_reply(reply: &str) -> (String, String) {
    let mut title = String::new();
    let mut body = Vec::new();
    for line in reply.lines() {
        if title.is_empty() {
            if let Some(t) = strip_label(line, "title:") {
                title = t.to_string();
                continue;
            }
        }
        body.push(strip_label(line, "summary:").unwrap_or(line));
    }
    (title, body.join("\n").trim().to_string())
}

pub(crate) fn summarize_content(
    chunk_id: &str,
    modality: Modality,
    content: &str,
    models: &Models,
) -> Result<Summary> {
    let prompt = match modality {
        Modality::Text => render(TEXT_SUMMARY, &[("text", content)]),
        Modality::Table => render(TABLE_SUMMARY, &[("table", content)]),
        Modality::Image => {
            return Err(Error::UnsupportedModality("image chunks are not summarized".into()))
        }
    };
    let reply = models.ask(ModelKind::Summarization, prompt)?;
    let (title, body) = parse_reply(&reply.text);
    if body.is_empty() {
        return Err(ModelError::Decode(format!("empty summary for chunk {chunk_id}")).into());
    }
    Ok(Summary { chunk_id: chunk_id.to_string(), title, body })
}

/// Summarize a text or table chunk with the summarization profile.
pub fn summarize_chunk(chunk: &ModalityChunk, models: &Models) -> Result<Summary> {
    summarize_content(&chunk.id, chunk.modality, &chunk.content, models)
}
