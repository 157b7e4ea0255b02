//! Partition agreement metrics: the adjusted Rand index over a
//! gold-vs-predicted contingency table, per-word score aggregation, and
//! Krippendorff's alpha for nominal annotation data.
//!
//! ARI is chance-corrected, so trivial predictions (one cluster for
//! everything, or one cluster per item) score exactly zero against any
//! non-trivial gold partition. Binomial pair counts are accumulated in
//! integer arithmetic and divided once at the end.
//!
//! Aggregation across words defaults to context-count weighting; a macro
//! (unweighted) mean is available for analysis. Pooling all contexts into
//! a single contingency table would be a third option, not implemented:
//! sense labels are only meaningful within one word, so cross-word pools
//! reward degenerate labelings.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    /// Gold and predicted label vectors differ in length.
    LengthMismatch { gold: usize, pred: usize },
    /// No items to score.
    Empty,
    /// ARI needs at least two items.
    TooFewItems { n: usize },
    /// No aggregation over an empty score map.
    NoScores,
    /// Alpha needs at least one unit with two or more non-missing values.
    NoPairableUnit,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { gold, pred } => {
                write!(f, "label vectors differ in length: gold {gold}, predicted {pred}")
            }
            Self::Empty => write!(f, "empty label vectors"),
            Self::TooFewItems { n } => write!(f, "ARI requires at least 2 items, got {n}"),
            Self::NoScores => write!(f, "no per-word scores to aggregate"),
            Self::NoPairableUnit => {
                write!(f, "no unit has two or more non-missing values")
            }
        }
    }
}

impl core::error::Error for MetricsError {}

/// Cross-tabulation of predicted clusters (rows) against gold classes
/// (columns). Rows and columns are indexed in first-occurrence order of
/// the corresponding labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    /// Tabulate paired gold/predicted labels.
    pub fn from_labels<G, P>(gold: &[G], pred: &[P]) -> Result<Self, MetricsError>
    where
        G: PartialEq,
        P: PartialEq,
    {
        if gold.len() != pred.len() {
            return Err(MetricsError::LengthMismatch { gold: gold.len(), pred: pred.len() });
        }
        if gold.is_empty() {
            return Err(MetricsError::Empty);
        }
        let mut row_index: Vec<&P> = Vec::new();
        let mut col_index: Vec<&G> = Vec::new();
        let mut cells: Vec<(usize, usize)> = Vec::with_capacity(gold.len());
        for (g, p) in gold.iter().zip(pred.iter()) {
            let i = match row_index.iter().position(|x| **x == *p) {
                Some(i) => i,
                None => {
                    row_index.push(p);
                    row_index.len() - 1
                }
            };
            let j = match col_index.iter().position(|x| **x == *g) {
                Some(j) => j,
                None => {
                    col_index.push(g);
                    col_index.len() - 1
                }
            };
            cells.push((i, j));
        }
        let mut counts = vec![vec![0u64; col_index.len()]; row_index.len()];
        for (i, j) in cells {
            counts[i][j] += 1;
        }
        let row_sums: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<u64> = (0..col_index.len())
            .map(|j| counts.iter().map(|r| r[j]).sum())
            .collect();
        let total = row_sums.iter().sum();
        Ok(Self { counts, row_sums, col_sums, total })
    }

    pub fn n_rows(&self) -> usize {
        self.counts.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_sums.len()
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.counts[row][col]
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn choose2(n: u64) -> u128 {
    let n = n as u128;
    n * (n.saturating_sub(1)) / 2
}

/// Adjusted Rand index of the two partitions behind `table`, in [-1, 1].
///
/// Identical partitions score 1. A single predicted cluster, or all
/// singleton predictions, scores exactly 0 against any gold partition
/// that is not itself trivial in the same way. When both partitions are
/// trivial and identical the chance-correction denominator vanishes and
/// the index is defined as 1.
pub fn ari(table: &ContingencyTable) -> Result<f64, MetricsError> {
    if table.total < 2 {
        return Err(MetricsError::TooFewItems { n: table.total as usize });
    }
    let index: u128 = table.counts.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_rows: u128 = table.row_sums.iter().map(|&c| choose2(c)).sum();
    let sum_cols: u128 = table.col_sums.iter().map(|&c| choose2(c)).sum();
    let pairs = choose2(table.total);

    // ARI = (index - expected) / (max - expected) with
    // expected = sum_rows * sum_cols / pairs and max = (sum_rows + sum_cols) / 2.
    // Cleared of denominators to keep everything integral until one division.
    let num = 2 * (index as i128 * pairs as i128 - (sum_rows * sum_cols) as i128);
    let den = (sum_rows + sum_cols) as i128 * pairs as i128 - 2 * (sum_rows * sum_cols) as i128;
    if den == 0 {
        // Both partitions trivial in the same way, hence identical.
        return Ok(1.0);
    }
    Ok(num as f64 / den as f64)
}

/// Adjusted Rand index computed by enumerating all item pairs, with no
/// contingency table. Independent of [`ari`]; the two must agree to
/// floating-point precision on every input.
pub fn ari_pair_oracle<G, P>(gold: &[G], pred: &[P]) -> Result<f64, MetricsError>
where
    G: PartialEq,
    P: PartialEq,
{
    if gold.len() != pred.len() {
        return Err(MetricsError::LengthMismatch { gold: gold.len(), pred: pred.len() });
    }
    if gold.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n = gold.len();
    if n < 2 {
        return Err(MetricsError::TooFewItems { n });
    }
    // Pair agreement counts: first index is "same gold class", second is
    // "same predicted cluster".
    let mut both = 0u128;
    let mut gold_only = 0u128;
    let mut pred_only = 0u128;
    let mut neither = 0u128;
    for s in 0..n {
        for t in s + 1..n {
            let same_gold = gold[s] == gold[t];
            let same_pred = pred[s] == pred[t];
            match (same_gold, same_pred) {
                (true, true) => both += 1,
                (true, false) => gold_only += 1,
                (false, true) => pred_only += 1,
                (false, false) => neither += 1,
            }
        }
    }
    let num = 2 * (neither as i128 * both as i128 - gold_only as i128 * pred_only as i128);
    let den = (neither + gold_only) as i128 * (gold_only + both) as i128
        + (neither + pred_only) as i128 * (pred_only + both) as i128;
    if den == 0 {
        return Ok(1.0);
    }
    Ok(num as f64 / den as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateMode {
    /// Mean of per-word scores weighted by context count.
    Weighted,
    /// Unweighted mean over words.
    Macro,
}

/// Combine per-word `(ari, n_contexts)` scores into one number.
pub fn aggregate_ari(scores: &[(f64, usize)], mode: AggregateMode) -> Result<f64, MetricsError> {
    if scores.is_empty() {
        return Err(MetricsError::NoScores);
    }
    match mode {
        AggregateMode::Weighted => {
            let total: usize = scores.iter().map(|&(_, n)| n).sum();
            if total == 0 {
                return Err(MetricsError::NoScores);
            }
            Ok(scores.iter().map(|&(a, n)| a * n as f64).sum::<f64>() / total as f64)
        }
        AggregateMode::Macro => {
            Ok(scores.iter().map(|&(a, _)| a).sum::<f64>() / scores.len() as f64)
        }
    }
}

/// Krippendorff's alpha for nominal data.
///
/// `units` holds one row per unit and one entry per coder; `None` marks a
/// missing value. Units with fewer than two non-missing values are
/// excluded. Agreement is perfect (alpha = 1) when every unit is
/// internally unanimous; alpha can go negative when coders disagree more
/// than chance would.
pub fn krippendorff_alpha<L: PartialEq>(units: &[Vec<Option<L>>]) -> Result<f64, MetricsError> {
    // Category index in first-occurrence order.
    let mut categories: Vec<&L> = Vec::new();
    let mut pairable: Vec<Vec<usize>> = Vec::new();
    for unit in units {
        let mut vals: Vec<usize> = Vec::new();
        for v in unit.iter().flatten() {
            let c = match categories.iter().position(|x| **x == *v) {
                Some(c) => c,
                None => {
                    categories.push(v);
                    categories.len() - 1
                }
            };
            vals.push(c);
        }
        if vals.len() >= 2 {
            pairable.push(vals);
        }
    }
    if pairable.is_empty() {
        return Err(MetricsError::NoPairableUnit);
    }
    let k = categories.len();
    // Coincidence matrix: each ordered within-unit pair (c, k) adds
    // 1/(m_u - 1), so a unit with m values contributes total mass m.
    let mut coincidence = vec![vec![0.0f64; k]; k];
    for vals in &pairable {
        let m = vals.len();
        let w = 1.0 / (m - 1) as f64;
        for (a, &ca) in vals.iter().enumerate() {
            for (b, &cb) in vals.iter().enumerate() {
                if a != b {
                    coincidence[ca][cb] += w;
                }
            }
        }
    }
    let marginals: Vec<f64> = coincidence.iter().map(|row| row.iter().sum()).collect();
    let n: f64 = marginals.iter().sum();
    let observed_off: f64 = (0..k)
        .flat_map(|c| (0..k).map(move |d| (c, d)))
        .filter(|&(c, d)| c != d)
        .map(|(c, d)| coincidence[c][d])
        .sum();
    let expected_off: f64 = (0..k)
        .flat_map(|c| (0..k).map(move |d| (c, d)))
        .filter(|&(c, d)| c != d)
        .map(|(c, d)| marginals[c] * marginals[d])
        .sum();
    if expected_off == 0.0 {
        // Single category everywhere: no disagreement is possible.
        return Ok(1.0);
    }
    // alpha = 1 - D_o / D_e with D_o = observed/n, D_e = expected/(n(n-1)).
    Ok(1.0 - (n - 1.0) * observed_off / expected_off)
}
