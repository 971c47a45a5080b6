use serde::{Deserialize, Serialize};

use crate::corpus::VectorIndex;
use crate::error::Result;
use crate::model::{Embedder, ModelKind, Models};
use crate::prompts::{self, render};
use crate::text::{content_tokens, token_overlap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievedContext {
    pub node_id: String,
    pub text: String,
    /// Current score: the cosine after retrieval, the rerank score after reranking.
    pub score: f64,
    pub rank: usize,
    pub retrieval_score: f64,
}

/// Nearest nodes to `query`, ranked from 1. `k` is clamped to the index size.
pub fn retrieve(query: &str, index: &VectorIndex, embedder: &dyn Embedder, k: usize) -> Result<Vec<RetrievedContext>> {
    let vector = embedder.embed_one(query)?;
    let hits = index.query(&vector, k.min(index.len()).max(1))?;
    Ok(hits
        .into_iter()
        .enumerate()
        .filter_map(|(i, hit)| {
            let node = index.get(&hit.node_id)?;
            Some(RetrievedContext {
                node_id: hit.node_id,
                text: node.payload.original_text.clone(),
                score: hit.score,
                rank: i + 1,
                retrieval_score: hit.score,
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reranker {
    #[default]
    Lexical,
    ModelJudged,
}

/// Share of the scenario's content tokens present in `context`.
pub fn lexical_score(scenario: &str, context: &str) -> f64 {
    let query = content_tokens(scenario);
    if query.is_empty() {
        return 0.0;
    }
    token_overlap(&query, &content_tokens(context)) as f64 / query.len() as f64
}

fn judged_score(scenario: &str, context: &str, models: &Models) -> Result<f64> {
    let prompt = render(prompts::RELEVANCE_JUDGE, &[("scenario", scenario), ("context", context)]);
    let reply = models.ask(ModelKind::Instruction, prompt)?;
    let score = reply
        .text
        .split(|c: char| !(c.is_ascii_digit() || c == '.'))
        .find_map(|t| t.parse::<f64>().ok())
        .unwrap_or(0.0);
    Ok((score / 10.0).clamp(0.0, 1.0))
}

/// Rescores `contexts` against `scenario` and keeps the best `top`.
///
/// Ties keep retrieval order, so an already well-ordered list comes back as its prefix.
pub fn rerank(
    contexts: &[RetrievedContext],
    scenario: &str,
    top: usize,
    reranker: Reranker,
    models: &Models,
) -> Result<Vec<RetrievedContext>> {
    let mut scored = Vec::with_capacity(contexts.len());
    for ctx in contexts {
        let score = match reranker {
            Reranker::Lexical => lexical_score(scenario, &ctx.text),
            Reranker::ModelJudged => judged_score(scenario, &ctx.text, models)?,
        };
        scored.push((score, ctx));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.rank.cmp(&b.1.rank)));
    Ok(scored
        .into_iter()
        .take(top)
        .enumerate()
        .map(|(i, (score, ctx))| RetrievedContext { score, rank: i + 1, ..ctx.clone() })
        .collect())
}
