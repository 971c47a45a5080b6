//! Intent refinement: turn a free-form application intent into a well-defined
//! intent by classifying it against the scenario catalog extracted from the
//! knowledge base.

use std::collections::HashSet;
use std::time::SystemTime;

use serde::{Deserialize, Serialize};

use crate::corpus::VectorIndex;
use crate::error::{Error, Result};
use crate::model::{ModelKind, Models};
use crate::prompts::{self, render};
use crate::text::match_key;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntentText {
    text: String,
    received_at: SystemTime,
}

impl IntentText {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::InvalidInput("intent text is empty".into()));
        }
        Ok(Self { text, received_at: SystemTime::now() })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn received_at(&self) -> SystemTime {
        self.received_at
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainInstruction(String);

impl DomainInstruction {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::InvalidInput("domain instruction is empty".into()));
        }
        Ok(Self(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Default for DomainInstruction {
    fn default() -> Self {
        Self(prompts::DOMAIN_INSTRUCTION.to_string())
    }
}

/// Ordered, case-insensitively unique list of scenario names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioCatalog {
    names: Vec<String>,
}

impl ScenarioCatalog {
    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for name in names {
            let name = name.as_ref().trim();
            let key = match_key(name);
            if !key.is_empty() && seen.insert(key) {
                out.push(name.to_string());
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyCatalog);
        }
        Ok(Self { names: out })
    }

    /// Parses a comma, semicolon or line separated list of names.
    pub fn parse_reply(reply: &str) -> Result<Self> {
        Self::from_names(
            reply
                .split([',', ';', '\n'])
                .map(|s| s.trim().trim_start_matches(['-', '*', '•']).trim().trim_end_matches('.')),
        )
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Canonical spelling of the entry matching `name`, ignoring case and punctuation.
    pub fn resolve(&self, name: &str) -> Option<&str> {
        let key = match_key(name);
        self.names.iter().find(|n| match_key(n) == key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellDefinedIntent {
    pub scenario_type: String,
    pub original_intent: IntentText,
}

/// Asks the query engine for every scenario the knowledge base can serve.
///
/// The instruction is embedded and the `k` nearest nodes, in index order,
/// become the context. The reply is split into names.
pub fn build_catalog(
    index: &VectorIndex,
    instruction: &DomainInstruction,
    models: &Models,
    k: usize,
) -> Result<ScenarioCatalog> {
    let query = models.embedder.embed_one(instruction.as_str())?;
    let mut hits = index.query(&query, k.min(index.len()).max(1))?;
    hits.sort_by_key(|h| h.position);
    let context: Vec<&str> = hits
        .iter()
        .filter_map(|h| index.get(&h.node_id))
        .map(|n| n.payload.original_text.as_str())
        .collect();
    let prompt = render(
        prompts::CATALOG_QUERY,
        &[("instruction", instruction.as_str()), ("context", &context.join("\n\n"))],
    );
    let reply = models.ask(ModelKind::Instruction, prompt)?;
    ScenarioCatalog::parse_reply(&reply.text)
}

pub fn assemble_refinement_prompt(intent: &IntentText, catalog: &ScenarioCatalog) -> String {
    let names = catalog.names().join(prompts::CATALOG_SEPARATOR);
    render(prompts::REFINEMENT, &[("intent", intent.as_str()), ("catalog", &names)])
}

fn strip_reply(reply: &str) -> &str {
    let mut s = reply.trim();
    for prefix in ["scenario type", "service/traffic scenario"] {
        if s.len() >= prefix.len() && s[..prefix.len()].eq_ignore_ascii_case(prefix) {
            let after = s[prefix.len()..].trim_start();
            if let Some(rest) = after.strip_prefix(':') {
                s = rest.trim();
            }
        }
    }
    s.trim_end_matches('.').trim()
}

/// Classifies `intent` into one catalog entry using the reasoning profile.
pub fn refine(intent: &IntentText, catalog: &ScenarioCatalog, models: &Models) -> Result<WellDefinedIntent> {
    if catalog.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    let reply = models.ask(ModelKind::Reasoning, assemble_refinement_prompt(intent, catalog))?;
    let first_line = reply.text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let scenario = catalog
        .resolve(strip_reply(first_line))
        .ok_or_else(|| Error::UnresolvableIntent { reply: reply.text.clone() })?;
    Ok(WellDefinedIntent { scenario_type: scenario.to_string(), original_intent: intent.clone() })
}
