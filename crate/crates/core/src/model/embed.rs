//! Deterministic hashed character-trigram embedder.

use super::{normalize, Embedder, ModelError};

pub const DEFAULT_DIMENSION: usize = 256;

const FNV32_OFFSET: u32 = 0x811c_9dc5;
const FNV32_PRIME: u32 = 0x0100_0193;

pub fn fnv1a32(bytes: &[u8]) -> u32 {
    bytes.iter().fold(FNV32_OFFSET, |h, b| (h ^ u32::from(*b)).wrapping_mul(FNV32_PRIME))
}

/// Bag of lowercase character trigrams hashed into `dimension` buckets with
/// FNV-1a, then L2-normalized.
///
/// Text is lowercased, whitespace runs collapse to one space, and the result
/// is padded with a space on each side, so any non-blank text has at least
/// one trigram. Blank text embeds to the zero vector.
#[derive(Debug, Clone)]
pub struct TrigramEmbedder {
    dimension: usize,
}

impl TrigramEmbedder {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        Self { dimension }
    }

    pub fn vector(&self, text: &str) -> Vec<f32> {
        let mut v = vec![0f32; self.dimension];
        let normalized = text.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ");
        if normalized.is_empty() {
            return v;
        }
        let chars: Vec<char> = format!(" {normalized} ").chars().collect();
        let mut buf = [0u8; 12];
        for w in chars.windows(3) {
            let mut len = 0;
            for c in w {
                len += c.encode_utf8(&mut buf[len..]).len();
            }
            let bucket = fnv1a32(&buf[..len]) as usize % self.dimension;
            v[bucket] += 1.0;
        }
        normalize(&mut v);
        v
    }
}

impl Default for TrigramEmbedder {
    fn default() -> Self {
        Self::new(DEFAULT_DIMENSION)
    }
}

impl Embedder for TrigramEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, ModelError> {
        Ok(texts.iter().map(|t| self.vector(t)).collect())
    }
}
