use super::{Modality, ModalityChunk, TextNode};
use crate::text::whitespace_tokens;
use crate::{Error, Result};

pub const DEFAULT_MAX_TOKENS: usize = 128;
pub const DEFAULT_OVERLAP: usize = 10;

/// Sliding word windows over a text chunk.
///
/// With `stride = max_tokens - overlap`, node `k` covers tokens
/// `[k * stride, min(k * stride + max_tokens, T))`; the last node is the one
/// that reaches `T`.
pub fn split_text(chunk: &ModalityChunk, max_tokens: usize, overlap: usize) -> Result<Vec<TextNode>> {
    if chunk.modality != Modality::Text {
        return Err(Error::UnsupportedModality(format!(
            "split_text expects a text chunk, got {}",
            chunk.modality.as_str()
        )));
    }
    if max_tokens == 0 || overlap >= max_tokens {
        return Err(Error::BadParams(format!(
            "need 0 <= overlap < max_tokens, got overlap={overlap} max_tokens={max_tokens}"
        )));
    }
    let tokens = whitespace_tokens(&chunk.content);
    let total = tokens.len();
    let stride = max_tokens - overlap;
    let mut nodes = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + max_tokens).min(total);
        nodes.push(TextNode {
            id: format!("{}#n{}", chunk.id, nodes.len()),
            parent_chunk_id: chunk.id.clone(),
            text: tokens[start..end].join(" "),
            token_start: start,
            token_end: end,
        });
        if end == total {
            break;
        }
        start += stride;
    }
    Ok(nodes)
}
