use super::retrieval::RetrievedContext;
use crate::prompts::{self, render};

pub fn render_contexts(contexts: &[RetrievedContext]) -> String {
    contexts
        .iter()
        .map(|c| format!("Context {}:\n{}", c.rank, c.text))
        .collect::<Vec<_>>()
        .join("\n\n")
}

fn instruction(scenario: &str) -> String {
    render(
        prompts::GENERATION,
        &[("scenario", scenario), ("format", prompts::OUTPUT_FORMAT), ("example", prompts::FEW_SHOT_4K)],
    )
}

/// Context block followed by the generation instruction for `scenario`.
pub fn assemble_generation_prompt(contexts: &[RetrievedContext], scenario: &str) -> String {
    let mut prompt = render(prompts::GENERATION_CONTEXT, &[("context", &render_contexts(contexts))]);
    prompt.push_str(&instruction(scenario));
    prompt
}

/// The generation instruction alone, for pipelines that retrieve nothing.
pub fn assemble_norag_prompt(scenario: &str) -> String {
    instruction(scenario)
}
