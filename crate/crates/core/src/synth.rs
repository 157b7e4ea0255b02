//! Synthetic (dataset, embedding store) pairs with planted sense
//! structure, small enough to verify every induction method at desk
//! scale.
//!
//! Each word gets a center direction and per-sense prototype directions
//! `normalize(center + separation * direction)`; topic token vectors
//! scatter around their sense prototype with Gaussian noise. The word's
//! own vector is the normalized sum of its sense prototypes, which is
//! exactly the additive-polysemy shape the subtraction-based prototype
//! method exploits. Contexts are the target token plus ten tokens
//! sampled from the sense's topic vocabulary, so clustering the context
//! vectors can recover the planted senses when separation outweighs
//! noise. Everything is a pure function of the seed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::dataset::{CharSpan, ContextRecord, Dataset};
use crate::embedding::{cosine, EmbeddingError, EmbeddingStore};
use crate::rng::{mix64, SplitMix64};

/// Topic tokens per context (the target token comes on top).
const CONTEXT_TOKENS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    InvalidSpec(&'static str),
    /// Generated token names must be unique; a collision is a bug.
    TokenCollision { token: String },
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidSpec(msg) => write!(f, "invalid synthetic spec: {msg}"),
            Self::TokenCollision { token } => {
                write!(f, "internal error: generated duplicate token '{token}'")
            }
        }
    }
}

impl core::error::Error for SynthError {}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_words: usize,
    pub senses_per_word: usize,
    pub contexts_per_sense: usize,
    pub dim: usize,
    /// Topic tokens generated per sense.
    pub vocab_per_sense: usize,
    /// Distance between a word's center and each sense direction; higher
    /// means more separable senses.
    pub separation: f64,
    /// Gaussian spread of token vectors around their sense prototype.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_words: 3,
            senses_per_word: 2,
            contexts_per_sense: 20,
            dim: 25,
            vocab_per_sense: 8,
            separation: 2.0,
            noise: 0.1,
            seed: 42,
        }
    }
}

/// Per-word ground truth: pairwise cosines of the sense prototypes.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTruth {
    pub word: String,
    pub prototype_cosines: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub dataset: Dataset,
    pub store: EmbeddingStore,
    pub truth: Vec<WordTruth>,
}

/// Deterministic word name: an index prefix for uniqueness plus a mixed
/// suffix so that names differ in more than their final byte (word-level
/// hashing splits then behave like they do on natural vocabulary).
pub fn word_name(index: usize) -> String {
    format!("word{index}x{:04x}", mix64(index as u64) & 0xFFFF)
}

pub fn generate(spec: &SynthSpec) -> Result<SynthOutput, SynthError> {
    if spec.n_words == 0
        || spec.senses_per_word == 0
        || spec.contexts_per_sense == 0
        || spec.vocab_per_sense == 0
    {
        return Err(SynthError::InvalidSpec("all counts must be positive"));
    }
    if spec.dim < 2 {
        return Err(SynthError::InvalidSpec("dimension must be at least 2"));
    }
    if !(spec.separation >= 0.0) || !(spec.noise >= 0.0) {
        return Err(SynthError::InvalidSpec("separation and noise must be non-negative"));
    }

    let mut rng = SplitMix64::new(spec.seed);
    let mut store = EmbeddingStore::new(spec.dim).expect("dim >= 2");
    let mut dataset = Dataset::default();
    let mut truth = Vec::with_capacity(spec.n_words);

    for word_idx in 0..spec.n_words {
        let word = word_name(word_idx);
        let center = random_unit(&mut rng, spec.dim);
        let mut prototypes = Vec::with_capacity(spec.senses_per_word);
        for _ in 0..spec.senses_per_word {
            let direction = random_unit(&mut rng, spec.dim);
            let prototype: Vec<f64> = center
                .iter()
                .zip(&direction)
                .map(|(c, d)| c + spec.separation * d)
                .collect();
            prototypes.push(normalize(&prototype));
        }

        let mut vocabulary: Vec<Vec<String>> = Vec::with_capacity(spec.senses_per_word);
        for (sense_idx, prototype) in prototypes.iter().enumerate() {
            let mut tokens = Vec::with_capacity(spec.vocab_per_sense);
            for token_idx in 0..spec.vocab_per_sense {
                let token = format!("{word}_s{sense_idx}_t{token_idx}");
                let vector: Vec<f64> = prototype
                    .iter()
                    .map(|p| p + spec.noise * rng.next_normal())
                    .collect();
                insert(&mut store, token.clone(), normalize(&vector))?;
                tokens.push(token);
            }
            vocabulary.push(tokens);
        }

        let mut word_vector = alloc::vec![0.0f64; spec.dim];
        for prototype in &prototypes {
            for (slot, p) in word_vector.iter_mut().zip(prototype) {
                *slot += p;
            }
        }
        insert(&mut store, word.clone(), normalize(&word_vector))?;

        let mut context_counter = 0usize;
        for (sense_idx, tokens) in vocabulary.iter().enumerate() {
            for _ in 0..spec.contexts_per_sense {
                context_counter += 1;
                let mut sampled: Vec<&str> = (0..CONTEXT_TOKENS)
                    .map(|_| tokens[rng.next_below(tokens.len())].as_str())
                    .collect();
                let target_slot = rng.next_below(CONTEXT_TOKENS + 1);
                sampled.insert(target_slot, &word);
                let (context, span) = join_with_span(&sampled, target_slot);
                dataset.records.push(ContextRecord {
                    context_id: format!("{word}.{context_counter}"),
                    word: word.clone(),
                    gold_sense_id: Some((sense_idx + 1).to_string()),
                    predict_sense_id: None,
                    positions: alloc::vec![span],
                    context,
                });
            }
        }

        let cosines: Vec<Vec<f64>> = prototypes
            .iter()
            .map(|a| prototypes.iter().map(|b| cosine(a, b).expect("same dim")).collect())
            .collect();
        truth.push(WordTruth { word, prototype_cosines: cosines });
    }

    Ok(SynthOutput { dataset, store, truth })
}

fn insert(store: &mut EmbeddingStore, token: String, vector: Vec<f64>) -> Result<(), SynthError> {
    store.insert(token.clone(), vector).map_err(|e| match e {
        EmbeddingError::DuplicateToken { token } => SynthError::TokenCollision { token },
        _ => SynthError::TokenCollision { token },
    })
}

fn random_unit(rng: &mut SplitMix64, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.next_normal()).collect();
    normalize(&v)
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    if norm == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / norm).collect()
}

/// Join tokens with single spaces and return the text plus the char span
/// of the token at `slot`.
fn join_with_span(tokens: &[&str], slot: usize) -> (String, CharSpan) {
    let mut text = String::new();
    let mut span = CharSpan { start: 0, end: 0 };
    let mut chars = 0usize;
    for (i, token) in tokens.iter().enumerate() {
        if i > 0 {
            text.push(' ');
            chars += 1;
        }
        let len = token.chars().count();
        if i == slot {
            span = CharSpan { start: chars, end: chars + len };
        }
        text.push_str(token);
        chars += len;
    }
    (text, span)
}
