//! Context vectorization: turn a context's tokens into one dense vector
//! by weighted averaging of token embeddings.
//!
//! Weighting schemes follow the participant systems: plain uniform
//! averaging, tf-idf, and tf-idf^p * chisq^q. The tf-idf statistics are
//! scoped to the target word's own context set (document = one context);
//! chi-square contrasts the word's contexts against every other record
//! in the dataset, which is the only place dataset-level information
//! enters a per-word pipeline.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use unicode_segmentation::UnicodeSegmentation;

use crate::dataset::{ContextRecord, Dataset};
use crate::embedding::EmbeddingStore;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VectorizeError {
    EmptyRecordGroup,
    /// tf-idf and chi-square weighting need precomputed word statistics.
    StatsRequired,
}

impl fmt::Display for VectorizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyRecordGroup => write!(f, "cannot compute statistics over zero records"),
            Self::StatsRequired => {
                write!(f, "weighting scheme requires word statistics, none provided")
            }
        }
    }
}

impl core::error::Error for VectorizeError {}

/// Case-folded token with its position in the original text, as Unicode
/// scalar offsets (start inclusive, end exclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Segment `text` at Unicode word boundaries, dropping punctuation and
/// whitespace. Tokens are lowercased; offsets index the original text.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars_seen = 0usize;
    let mut bytes_seen = 0usize;
    for (byte_start, word) in text.unicode_word_indices() {
        chars_seen += text[bytes_seen..byte_start].chars().count();
        bytes_seen = byte_start + word.len();
        let char_len = word.chars().count();
        tokens.push(Token {
            text: word.to_lowercase(),
            start: chars_seen,
            end: chars_seen + char_len,
        });
        chars_seen += char_len;
    }
    tokens
}

/// Token weighting applied inside the context average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightingScheme {
    /// Every token weighs 1.
    Uniform,
    /// tf(t, context) * idf(t) with idf smoothed to stay positive.
    TfIdf,
    /// (tf * idf)^p * chisq^q; degenerate chi-square tables fall back to
    /// a factor of 1 so the scheme degrades to tf-idf.
    TfIdfChiSq { p: f64, q: f64 },
}

impl WeightingScheme {
    /// The tf-idf^1.5 * chisq^0.5 combination.
    pub fn tfidf_chisq_default() -> Self {
        Self::TfIdfChiSq { p: 1.5, q: 0.5 }
    }

    pub fn needs_stats(&self) -> bool {
        !matches!(self, Self::Uniform)
    }
}

/// Per-token statistics for one word's context set.
#[derive(Debug, Clone)]
pub struct WordStats {
    /// Contexts of the word, i.e. the tf-idf document count.
    n_word: usize,
    /// Records of every other word in the dataset.
    n_other: usize,
    /// Per-token presence count within the word's contexts.
    df: BTreeMap<String, usize>,
    /// Per-token presence count among all other records.
    other_df: BTreeMap<String, usize>,
}

fn distinct_tokens(record: &ContextRecord) -> BTreeSet<String> {
    tokenize(&record.context).into_iter().map(|t| t.text).collect()
}

impl WordStats {
    /// Gather df and association counts for `records_of_word`, which must
    /// all belong to one word and be part of `dataset`.
    pub fn compute(
        records_of_word: &[&ContextRecord],
        dataset: &Dataset,
    ) -> Result<Self, VectorizeError> {
        let first = records_of_word.first().ok_or(VectorizeError::EmptyRecordGroup)?;
        let word = first.word.as_str();
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for record in records_of_word {
            for token in distinct_tokens(record) {
                *df.entry(token).or_insert(0) += 1;
            }
        }
        let mut other_df: BTreeMap<String, usize> = BTreeMap::new();
        let mut n_other = 0usize;
        for record in dataset.records.iter().filter(|r| r.word != word) {
            n_other += 1;
            for token in distinct_tokens(record) {
                *other_df.entry(token).or_insert(0) += 1;
            }
        }
        Ok(Self { n_word: records_of_word.len(), n_other, df, other_df })
    }

    pub fn context_count(&self) -> usize {
        self.n_word
    }

    /// Presence count of `token` within the word's contexts.
    pub fn df(&self, token: &str) -> usize {
        self.df.get(token).copied().unwrap_or(0)
    }

    /// The 2x2 association counts (a, b, c, d): the word's contexts
    /// with/without the token, and the other records with/without it.
    pub fn association(&self, token: &str) -> (u64, u64, u64, u64) {
        let a = self.df(token) as u64;
        let b = self.other_df.get(token).copied().unwrap_or(0) as u64;
        let c = self.n_word as u64 - a;
        let d = self.n_other as u64 - b;
        (a, b, c, d)
    }

    /// Smoothed inverse document frequency: ln((1+N)/(1+df)) + 1.
    /// Strictly positive, so any in-vocabulary token contributes weight.
    pub fn idf(&self, token: &str) -> f64 {
        let n = self.n_word as f64;
        let df = self.df(token) as f64;
        libm::log((1.0 + n) / (1.0 + df)) + 1.0
    }

    /// Chi-square of `token` against the word's context set; 0 for
    /// degenerate tables (zero marginal, e.g. a single-word dataset).
    pub fn chi_square(&self, token: &str) -> f64 {
        let (a, b, c, d) = self.association(token);
        chi_square(a, b, c, d)
    }
}

/// Pearson chi-square of a 2x2 table: N(ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)).
/// Degenerate denominators yield 0.
pub fn chi_square(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let denom = (a + b) as f64 * (c + d) as f64 * (a + c) as f64 * (b + d) as f64;
    if denom == 0.0 {
        return 0.0;
    }
    let n = (a + b + c + d) as f64;
    let diff = a as f64 * d as f64 - b as f64 * c as f64;
    n * diff * diff / denom
}

/// Weight of one token occurrence inside `context_tokens`.
pub fn token_weight(
    token: &str,
    context_tokens: &[Token],
    stats: &WordStats,
    scheme: &WeightingScheme,
) -> f64 {
    match scheme {
        WeightingScheme::Uniform => 1.0,
        WeightingScheme::TfIdf => tf(token, context_tokens) * stats.idf(token),
        WeightingScheme::TfIdfChiSq { p, q } => {
            let tfidf = tf(token, context_tokens) * stats.idf(token);
            let (a, b, c, d) = stats.association(token);
            let denom = (a + b) * (c + d) * (a + c) * (b + d);
            // Degenerate table: no contrast available, degrade to tf-idf.
            let chi = if denom == 0 { 1.0 } else { chi_square(a, b, c, d) };
            libm::pow(tfidf, *p) * libm::pow(chi, *q)
        }
    }
}

fn tf(token: &str, context_tokens: &[Token]) -> f64 {
    context_tokens.iter().filter(|t| t.text == token).count() as f64
}

/// Weighted average of in-vocabulary token embeddings with an arbitrary
/// weight function. Returns `(vector, oov_flag)`; the flag is set and the
/// vector is zero when no token contributes. A weight sum of zero over
/// contributing tokens falls back to the uniform average of those tokens.
pub fn context_vector_with<F>(
    record: &ContextRecord,
    store: &EmbeddingStore,
    exclude_target: bool,
    weight: F,
) -> (Vec<f64>, bool)
where
    F: Fn(&Token, &[Token]) -> f64,
{
    let tokens = tokenize(&record.context);
    let target = record.word.to_lowercase();
    let contributing: Vec<&Token> = tokens
        .iter()
        .filter(|t| !(exclude_target && t.text == target))
        .filter(|t| store.contains(&t.text))
        .collect();
    let mut acc = alloc::vec![0.0f64; store.dim()];
    if contributing.is_empty() {
        return (acc, true);
    }
    let mut total = 0.0;
    for token in &contributing {
        let w = weight(token, &tokens);
        if w == 0.0 {
            continue;
        }
        total += w;
        for (slot, x) in acc.iter_mut().zip(store.get(&token.text).expect("checked")) {
            *slot += w * x;
        }
    }
    if total <= 0.0 {
        // All weights vanished (possible under chi-square exponents);
        // fall back to the plain average so the context stays usable.
        acc.iter_mut().for_each(|x| *x = 0.0);
        for token in &contributing {
            total += 1.0;
            for (slot, x) in acc.iter_mut().zip(store.get(&token.text).expect("checked")) {
                *slot += x;
            }
        }
    }
    for slot in acc.iter_mut() {
        *slot /= total;
    }
    (acc, false)
}

/// Weighted average of the record's token embeddings under `scheme`.
///
/// `stats` may be `None` only for the uniform scheme. Tokens equal to the
/// (case-folded) target word are skipped when `exclude_target` is set.
pub fn context_vector(
    record: &ContextRecord,
    store: &EmbeddingStore,
    stats: Option<&WordStats>,
    scheme: &WeightingScheme,
    exclude_target: bool,
) -> Result<(Vec<f64>, bool), VectorizeError> {
    if scheme.needs_stats() && stats.is_none() {
        return Err(VectorizeError::StatsRequired);
    }
    Ok(context_vector_with(record, store, exclude_target, |token, all| match scheme {
        WeightingScheme::Uniform => 1.0,
        _ => token_weight(&token.text, all, stats.expect("checked above"), scheme),
    }))
}
