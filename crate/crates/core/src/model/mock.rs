//! Deterministic rule-table chat model.
//!
//! Each rule pairs a prompt matcher with a responder that is a pure function
//! of the prompt. Rules are tried in order and the first match answers; the
//! table always ends with a catch-all.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use super::{ChatModel, ChatRequest, ChatResponse, ModelError};
use crate::grid::{self, scenario_rows};
use crate::prompts::{self, markers, CATALOG_SEPARATOR};
use crate::text::{content_tokens, match_key, sentence_spans, token_overlap, whitespace_tokens};

pub const UNKNOWN_REPLY: &str = "Scenario Type: UNKNOWN";

type Responder = Arc<dyn Fn(&str) -> String + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matcher {
    Contains(String),
    Always,
}

impl Matcher {
    fn matches(&self, prompt: &str) -> bool {
        match self {
            Matcher::Contains(s) => prompt.contains(s.as_str()),
            Matcher::Always => true,
        }
    }
}

#[derive(Clone)]
pub struct MockRule {
    pub name: String,
    pub matcher: Matcher,
    responder: Responder,
}

impl MockRule {
    pub fn new(
        name: impl Into<String>,
        matcher: Matcher,
        responder: impl Fn(&str) -> String + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), matcher, responder: Arc::new(responder) }
    }

    pub fn respond(&self, prompt: &str) -> String {
        (self.responder)(prompt)
    }
}

impl fmt::Debug for MockRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MockRule").field("name", &self.name).field("matcher", &self.matcher).finish()
    }
}

#[derive(Debug, Clone)]
pub struct MockRuleTable {
    rules: Vec<MockRule>,
}

impl MockRuleTable {
    /// Builds a table from `rules`, appending the catch-all when the last
    /// rule is not already unconditional.
    pub fn new(mut rules: Vec<MockRule>) -> Self {
        if !matches!(rules.last(), Some(r) if r.matcher == Matcher::Always) {
            rules.push(catch_all());
        }
        Self { rules }
    }

    pub fn rules(&self) -> &[MockRule] {
        &self.rules
    }

    pub fn respond(&self, prompt: &str) -> (String, &str) {
        let rule = self
            .rules
            .iter()
            .find(|r| r.matcher.matches(prompt))
            .expect("rule table always ends with a catch-all");
        (rule.respond(prompt), &rule.name)
    }
}

impl Default for MockRuleTable {
    fn default() -> Self {
        mock_rules_default()
    }
}

/// The shipped rules: text and table summarization, catalog listing,
/// scenario classification, structured generation, and the catch-all.
pub fn mock_rules_default() -> MockRuleTable {
    MockRuleTable::new(vec![
        MockRule::new("text-summary", Matcher::Contains(markers::TEXT_SUMMARY.into()), summarize_text),
        MockRule::new(
            "table-summary",
            Matcher::Contains(markers::TABLE_SUMMARY.into()),
            summarize_table,
        ),
        MockRule::new(
            "catalog-listing",
            Matcher::Contains(prompts::DOMAIN_INSTRUCTION.into()),
            list_catalog,
        ),
        MockRule::new(
            "classification",
            Matcher::Contains(markers::CLASSIFICATION.into()),
            classify,
        ),
        MockRule::new(
            "structured-generation",
            Matcher::Contains(markers::GENERATION.into()),
            generate_structured,
        ),
        catch_all(),
    ])
}

fn catch_all() -> MockRule {
    MockRule::new("catch-all", Matcher::Always, |_| UNKNOWN_REPLY.to_string())
}

fn summarize_text(prompt: &str) -> String {
    let text = prompts::between(prompt, markers::TEXT_SUMMARY_OPEN, markers::TEXT_SUMMARY_CLOSE)
        .unwrap_or(prompt);
    let first = sentence_spans(text).first().map(|r| &text[r.clone()]).unwrap_or("");
    let body: Vec<&str> = whitespace_tokens(first).into_iter().take(32).collect();
    let title: Vec<&str> = body.iter().take(6).copied().collect();
    let title = title.join(" ");
    format!(
        "Title: {}\nSummary: {}",
        title.trim_end_matches(|c: char| c.is_ascii_punctuation()),
        body.join(" ")
    )
}

fn summarize_table(prompt: &str) -> String {
    let table = prompts::between(prompt, markers::TABLE_SUMMARY_OPEN, markers::TABLE_SUMMARY_CLOSE)
        .unwrap_or(prompt);
    let mut rows = table
        .lines()
        .filter_map(|l| grid::split_any(l).map(|(_, cells)| cells))
        .filter(|cells| !grid::is_rule_row(cells));
    let header = rows.next().unwrap_or_default();
    let names: Vec<String> = rows.map(|r| r[0].clone()).filter(|n| !n.is_empty()).collect();
    format!("Title: {}\nSummary: {}", header.join(", "), names.join(", "))
}

fn list_catalog(prompt: &str) -> String {
    let mut seen = Vec::<String>::new();
    let mut names = Vec::new();
    for row in scenario_rows(prompt) {
        let key = match_key(&row.name);
        if !seen.contains(&key) {
            seen.push(key);
            names.push(row.name);
        }
    }
    if names.is_empty() {
        return UNKNOWN_REPLY.into();
    }
    names.join(", ")
}

/// Index of the best candidate: most shared content tokens, then an exact
/// name match, then earliest position. `None` when nothing overlaps.
pub(crate) fn best_match<'a, I>(query: &str, candidates: I) -> Option<usize>
where
    I: IntoIterator<Item = &'a str>,
{
    let q_tokens = content_tokens(query);
    let q_key = match_key(query);
    let mut best: Option<(usize, bool, usize)> = None;
    for (i, cand) in candidates.into_iter().enumerate() {
        let overlap = token_overlap(&q_tokens, &content_tokens(cand));
        let exact = match_key(cand) == q_key;
        if overlap == 0 && !exact {
            continue;
        }
        let better = match best {
            None => true,
            Some((bo, be, _)) => (overlap, exact) > (bo, be),
        };
        if better {
            best = Some((overlap, exact, i));
        }
    }
    best.map(|(_, _, i)| i)
}

fn classify(prompt: &str) -> String {
    let Some(start) = prompt.find(markers::INTENT_OPEN) else {
        return UNKNOWN_REPLY.into();
    };
    let rest = &prompt[start + markers::INTENT_OPEN.len()..];
    let Some(mid) = rest.rfind(markers::INTENT_CLOSE) else {
        return UNKNOWN_REPLY.into();
    };
    let intent = &rest[..mid];
    let list_part = &rest[mid + markers::INTENT_CLOSE.len()..];
    let Some(end) = list_part.rfind(markers::CATALOG_CLOSE) else {
        return UNKNOWN_REPLY.into();
    };
    let catalog: Vec<&str> = list_part[..end]
        .split(CATALOG_SEPARATOR.trim())
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    match best_match(intent, catalog.iter().copied()) {
        Some(i) => catalog[i].to_string(),
        None => UNKNOWN_REPLY.into(),
    }
}

fn is_blank_cell(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t == "-" || t.eq_ignore_ascii_case("n/a")
}

fn generate_structured(prompt: &str) -> String {
    let context = prompts::between(prompt, markers::CONTEXT_OPEN, markers::CONTEXT_CLOSE).unwrap_or("");
    let Some(scenario) = prompts::between(prompt, markers::SCENARIO_OPEN, markers::SCENARIO_CLOSE) else {
        return UNKNOWN_REPLY.into();
    };
    let rows = scenario_rows(context);
    let Some(i) = best_match(scenario, rows.iter().map(|r| r.name.as_str())) else {
        return UNKNOWN_REPLY.into();
    };
    let row = &rows[i];
    let items: Vec<String> = row
        .cells
        .iter()
        .filter(|(h, v)| !h.is_empty() && !is_blank_cell(v))
        .map(|(h, v)| format!("{h}: {v}"))
        .collect();
    if items.is_empty() {
        return UNKNOWN_REPLY.into();
    }
    format!("Scenario Type: {}, Key Performance Factors: {}", row.name, items.join(", "))
}

/// Chat model backed by a [`MockRuleTable`].
#[derive(Debug, Clone, Default)]
pub struct MockChat {
    table: MockRuleTable,
}

impl MockChat {
    pub fn new(table: MockRuleTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &MockRuleTable {
        &self.table
    }
}

impl ChatModel for MockChat {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse, ModelError> {
        req.check()?;
        let started = Instant::now();
        let (text, _) = self.table.respond(&req.prompt);
        Ok(ChatResponse {
            text,
            model_name: req.profile.name.clone(),
            latency_seconds: started.elapsed().as_secs_f64(),
        })
    }
}
