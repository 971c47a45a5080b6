//! Small text helpers shared by ingestion, classification, reranking and the
//! mock model.

use std::collections::BTreeSet;
use std::ops::Range;

const STOPWORDS: &[&str] = &[
    "a", "an", "and", "any", "are", "at", "be", "by", "for", "from", "i", "in", "is", "it", "like",
    "me", "my", "need", "of", "on", "or", "our", "some", "that", "the", "this", "to", "want", "we",
    "with", "without", "would",
];

/// Whitespace-delimited words. This is the token unit for chunking.
pub fn whitespace_tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Lowercased alphanumeric runs.
pub fn word_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Case- and punctuation-insensitive comparison key.
///
/// `"3K Cloud VR (Game)"` and `"3k cloud vr game"` share a key, as do
/// `"4K On-Demand Video"` and `"4K On Demand Video"`.
pub fn match_key(text: &str) -> String {
    word_tokens(text).join(" ")
}

/// Consonant skeleton of a lowercase token: plural `s` dropped, first
/// character kept, later vowels removed, repeated letters collapsed.
/// Folds common misspellings together (`airoplane` / `airplanes`).
pub fn skeleton(token: &str) -> String {
    let mut t: Vec<char> = token.chars().collect();
    if t.len() > 3 && t.last() == Some(&'s') && t[t.len() - 2] != 's' {
        t.pop();
    }
    let mut out = String::with_capacity(t.len());
    let mut prev: Option<char> = None;
    for (i, c) in t.into_iter().enumerate() {
        let keep = i == 0 || !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u');
        if keep && prev != Some(c) {
            out.push(c);
            prev = Some(c);
        }
    }
    out
}

/// Content-bearing tokens of a phrase, as skeletons, stopwords removed.
pub fn content_tokens(text: &str) -> BTreeSet<String> {
    word_tokens(text)
        .into_iter()
        .filter(|t| !STOPWORDS.contains(&t.as_str()))
        .map(|t| skeleton(&t))
        .collect()
}

/// Number of content tokens of `candidate` that also occur in `query`.
pub fn token_overlap(query: &BTreeSet<String>, candidate: &BTreeSet<String>) -> usize {
    candidate.intersection(query).count()
}

/// Byte ranges of sentences. A sentence ends at `.`, `?` or `!` followed by
/// whitespace or end of text; ranges are trimmed and never empty.
pub fn sentence_spans(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if matches!(c, '.' | '?' | '!') {
            let at_boundary = match iter.peek() {
                None => true,
                Some((_, next)) => next.is_whitespace(),
            };
            if at_boundary {
                let end = i + c.len_utf8();
                push_trimmed(text, start..end, &mut spans);
                start = end;
            }
        }
    }
    push_trimmed(text, start..text.len(), &mut spans);
    spans
}

fn push_trimmed(text: &str, range: Range<usize>, spans: &mut Vec<Range<usize>>) {
    let slice = &text[range.clone()];
    let lead = slice.len() - slice.trim_start().len();
    let trimmed = slice.trim();
    if !trimmed.is_empty() {
        let s = range.start + lead;
        spans.push(s..s + trimmed.len());
    }
}

/// Collapse whitespace runs into single spaces and trim.
pub fn collapse_whitespace(text: &str) -> String {
    whitespace_tokens(text).join(" ")
}
