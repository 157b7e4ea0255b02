//! Per-word ARI scoring of a predicted labeling against gold, and the
//! plain-text evaluation report.

use std::collections::BTreeMap;
use std::fmt;

use wsi_core::dataset::Dataset;
use wsi_core::metrics::{aggregate_ari, ari, AggregateMode, ContingencyTable, MetricsError};

#[derive(Debug)]
pub enum EvalError {
    /// Context ids of the two files do not line up.
    IdMismatch { detail: String },
    MissingGold { context_id: String },
    MissingPrediction { context_id: String },
    /// Scoring failed for one word (for example a single-context word,
    /// for which ARI is undefined).
    Word { word: String, source: MetricsError },
    Metrics(MetricsError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IdMismatch { detail } => write!(f, "context id mismatch: {detail}"),
            Self::MissingGold { context_id } => {
                write!(f, "record '{context_id}' has no gold sense id")
            }
            Self::MissingPrediction { context_id } => {
                write!(f, "record '{context_id}' has no predicted sense id")
            }
            Self::Word { word, source } => write!(f, "word '{word}': {source}"),
            Self::Metrics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<MetricsError> for EvalError {
    fn from(e: MetricsError) -> Self {
        Self::Metrics(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordScore {
    pub word: String,
    pub n_contexts: usize,
    pub ari: f64,
}

/// Per-word rows in gold first-occurrence order plus both aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<WordScore>,
    pub weighted: f64,
    pub macro_mean: f64,
}

/// Score `pred` against `gold`, joining records by context id. The two
/// datasets must cover exactly the same ids; gold labels come from
/// `gold`, predicted labels from `pred`.
pub fn evaluate(gold: &Dataset, pred: &Dataset) -> Result<EvalReport, EvalError> {
    let mut predictions: BTreeMap<&str, &str> = BTreeMap::new();
    for record in &pred.records {
        let label = record.predict_sense_id.as_deref().ok_or_else(|| {
            EvalError::MissingPrediction { context_id: record.context_id.clone() }
        })?;
        predictions.insert(&record.context_id, label);
    }
    if pred.len() != gold.len() {
        return Err(EvalError::IdMismatch {
            detail: format!("gold has {} records, predictions {}", gold.len(), pred.len()),
        });
    }

    // Group per word in gold order.
    let mut rows = Vec::new();
    for (word, indices) in gold.group_by_word() {
        let mut gold_labels = Vec::with_capacity(indices.len());
        let mut pred_labels = Vec::with_capacity(indices.len());
        for &idx in &indices {
            let record = &gold.records[idx];
            let g = record.gold_sense_id.as_deref().ok_or_else(|| {
                EvalError::MissingGold { context_id: record.context_id.clone() }
            })?;
            let p = predictions.get(record.context_id.as_str()).ok_or_else(|| {
                EvalError::IdMismatch {
                    detail: format!("context '{}' has no prediction", record.context_id),
                }
            })?;
            gold_labels.push(g);
            pred_labels.push(*p);
        }
        let table = ContingencyTable::from_labels(&gold_labels, &pred_labels)
            .map_err(|source| EvalError::Word { word: word.clone(), source })?;
        let score =
            ari(&table).map_err(|source| EvalError::Word { word: word.clone(), source })?;
        rows.push(WordScore { word, n_contexts: indices.len(), ari: score });
    }

    let scores: Vec<(f64, usize)> = rows.iter().map(|r| (r.ari, r.n_contexts)).collect();
    Ok(EvalReport {
        weighted: aggregate_ari(&scores, AggregateMode::Weighted)?,
        macro_mean: aggregate_ari(&scores, AggregateMode::Macro)?,
        rows,
    })
}

/// Six decimal places, with negative zero normalized away.
pub fn fmt6(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.6}")
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{}\t{}\t{}", row.word, row.n_contexts, fmt6(row.ari))?;
        }
        writeln!(f, "weighted_ari\t{}", fmt6(self.weighted))?;
        writeln!(f, "macro_ari\t{}", fmt6(self.macro_mean))
    }
}

/// Parse an annotation matrix: one row per unit, one column per coder,
/// tab-separated, empty cell = missing. Rows must be rectangular.
pub fn parse_annotation_matrix(text: &str) -> Result<Vec<Vec<Option<String>>>, String> {
    let mut units = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let cells: Vec<Option<String>> = line
            .split('\t')
            .map(|c| if c.is_empty() { None } else { Some(c.to_string()) })
            .collect();
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(format!(
                    "line {}: expected {} columns, found {}",
                    idx + 1,
                    w,
                    cells.len()
                ));
            }
            Some(_) => {}
        }
        units.push(cells);
    }
    if units.is_empty() {
        return Err("annotation file is empty".to_string());
    }
    Ok(units)
}
