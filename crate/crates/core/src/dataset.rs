//! Lexical-sample dataset model: one record per ambiguous-word usage,
//! plus the pure transforms the evaluation workflow needs (validation,
//! per-word grouping, deterministic public/private splitting, context
//! extraction from raw text, and summary statistics).
//!
//! All offsets are Unicode scalar indices, never bytes, so Cyrillic text
//! means the same thing regardless of encoding details.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::rng::{fnv1a_64, FNV_OFFSET_BASIS};
use crate::vectorize::tokenize;

/// Character-offset range, start inclusive, end exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharSpan {
    pub start: usize,
    pub end: usize,
}

/// One usage of an ambiguous target word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextRecord {
    pub context_id: String,
    pub word: String,
    pub gold_sense_id: Option<String>,
    pub predict_sense_id: Option<String>,
    /// Occurrences of the target word inside `context`.
    pub positions: Vec<CharSpan>,
    pub context: String,
}

/// Ordered collection of context records.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub records: Vec<ContextRecord>,
}

/// Invariant violation found by [`Dataset::validate`]. Violations are
/// data, not faults: an invalid dataset can still be inspected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateContextId { context_id: String },
    EmptyWord { context_id: String },
    EmptySpan { context_id: String, start: usize, end: usize },
    SpanOutOfRange { context_id: String, start: usize, end: usize, context_len: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateContextId { context_id } => {
                write!(f, "duplicate context_id '{context_id}'")
            }
            Self::EmptyWord { context_id } => {
                write!(f, "record '{context_id}' has an empty word")
            }
            Self::EmptySpan { context_id, start, end } => {
                write!(f, "record '{context_id}' has an empty position span {start}-{end}")
            }
            Self::SpanOutOfRange { context_id, start, end, context_len } => write!(
                f,
                "record '{context_id}' position {start}-{end} exceeds context length {context_len}"
            ),
        }
    }
}

/// Word-level split parameters. Membership is a pure function of
/// (word, seed, fraction): the word's UTF-8 bytes are hashed with
/// FNV-1a-64 after the eight little-endian seed bytes, and the word is
/// public when hash / 2^64 falls below the fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub public_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(public_fraction: f64, seed: u64) -> Self {
        Self { public_fraction, seed }
    }

    pub fn is_public(&self, word: &str) -> bool {
        let h = fnv1a_64(word.as_bytes(), fnv1a_64(&self.seed.to_le_bytes(), FNV_OFFSET_BASIS));
        let threshold = if self.public_fraction <= 0.0 {
            0u128
        } else if self.public_fraction >= 1.0 {
            1u128 << 64
        } else {
            (self.public_fraction * 18_446_744_073_709_551_616.0) as u128
        };
        (h as u128) < threshold
    }
}

/// Dataset-level summary counts. Sense counts are `None` when any record
/// lacks a gold label.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub words: usize,
    pub contexts: usize,
    pub senses: Option<usize>,
    pub avg_senses_per_word: Option<f64>,
}

impl Dataset {
    pub fn new(records: Vec<ContextRecord>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Check every type invariant; an empty result means the dataset is
    /// well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut seen: alloc::collections::BTreeSet<&str> = alloc::collections::BTreeSet::new();
        for record in &self.records {
            if !seen.insert(&record.context_id) {
                violations.push(Violation::DuplicateContextId {
                    context_id: record.context_id.clone(),
                });
            }
            if record.word.is_empty() {
                violations.push(Violation::EmptyWord { context_id: record.context_id.clone() });
            }
            let context_len = record.context.chars().count();
            for span in &record.positions {
                if span.start >= span.end {
                    violations.push(Violation::EmptySpan {
                        context_id: record.context_id.clone(),
                        start: span.start,
                        end: span.end,
                    });
                } else if span.end > context_len {
                    violations.push(Violation::SpanOutOfRange {
                        context_id: record.context_id.clone(),
                        start: span.start,
                        end: span.end,
                        context_len,
                    });
                }
            }
        }
        violations
    }

    /// Record indices grouped by word, groups in first-seen word order.
    pub fn group_by_word(&self) -> Vec<(String, Vec<usize>)> {
        let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
        for (idx, record) in self.records.iter().enumerate() {
            match groups.iter_mut().find(|(w, _)| *w == record.word) {
                Some((_, indices)) => indices.push(idx),
                None => groups.push((record.word.clone(), alloc::vec![idx])),
            }
        }
        groups
    }

    /// Split into (public, private) by whole words. Record order within
    /// each part follows the input.
    pub fn split_public_private(&self, spec: &SplitSpec) -> (Dataset, Dataset) {
        let mut public = Dataset::default();
        let mut private = Dataset::default();
        for record in &self.records {
            if spec.is_public(&record.word) {
                public.records.push(record.clone());
            } else {
                private.records.push(record.clone());
            }
        }
        (public, private)
    }

    /// Summary counts; permutation invariant.
    pub fn stats(&self) -> DatasetStats {
        let mut words: Vec<&str> = Vec::new();
        let mut senses: Vec<(&str, &str)> = Vec::new();
        let mut all_labeled = true;
        for record in &self.records {
            if !words.contains(&record.word.as_str()) {
                words.push(&record.word);
            }
            match &record.gold_sense_id {
                Some(g) => {
                    let key = (record.word.as_str(), g.as_str());
                    if !senses.contains(&key) {
                        senses.push(key);
                    }
                }
                None => all_labeled = false,
            }
        }
        let (sense_count, avg) = if all_labeled {
            let avg = if words.is_empty() { 0.0 } else { senses.len() as f64 / words.len() as f64 };
            (Some(senses.len()), Some(avg))
        } else {
            (None, None)
        };
        DatasetStats {
            words: words.len(),
            contexts: self.records.len(),
            senses: sense_count,
            avg_senses_per_word: avg,
        }
    }
}

/// Cut one context per occurrence of `target` out of `corpus`, taking up
/// to `window` tokens on each side (truncated at text boundaries).
///
/// Matching is token-level and case-insensitive with no lemmatization;
/// the emitted record's single position marks the occurrence within the
/// emitted context, in Unicode scalar offsets.
pub fn extract_contexts(corpus: &str, target: &str, window: usize) -> Vec<ContextRecord> {
    let tokens = tokenize(corpus);
    let target_folded = target.to_lowercase();
    // Byte offset of every scalar index, for cheap substring cuts.
    let byte_at: Vec<usize> = corpus
        .char_indices()
        .map(|(b, _)| b)
        .chain(core::iter::once(corpus.len()))
        .collect();
    let mut records = Vec::new();
    for (idx, token) in tokens.iter().enumerate() {
        if token.text != target_folded {
            continue;
        }
        let lo = idx.saturating_sub(window);
        let hi = (idx + window).min(tokens.len() - 1);
        let span_start = tokens[lo].start;
        let span_end = tokens[hi].end;
        let context = corpus[byte_at[span_start]..byte_at[span_end]].to_string();
        records.push(ContextRecord {
            context_id: format!("{}.{}", target, records.len() + 1),
            word: target.to_string(),
            gold_sense_id: None,
            predict_sense_id: None,
            positions: alloc::vec![CharSpan {
                start: token.start - span_start,
                end: token.end - span_start,
            }],
            context,
        });
    }
    records
}
