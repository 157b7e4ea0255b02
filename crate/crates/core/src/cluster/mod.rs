//! Deterministic clustering over context vectors: affinity propagation,
//! agglomerative (average and Ward linkage), and k-means.
//!
//! All three algorithms are pure functions of their inputs (including
//! the seed, where one exists) and emit labels in canonical
//! first-occurrence numbering, so internal cluster ordering never leaks.

mod affinity;
mod agglomerative;
mod kmeans;

pub use affinity::{affinity_propagation, ApConfig, ApResult, Preference};
pub use agglomerative::{agglomerative, Linkage, StopRule};
pub use kmeans::kmeans;

use alloc::vec::Vec;
use core::fmt;

use crate::embedding::cosine;

#[derive(Debug, Clone, PartialEq)]
pub enum ClusterError {
    Empty,
    DimensionMismatch,
    NonFinite,
    InvalidK { k: usize, n: usize },
    InvalidConfig(&'static str),
}

impl fmt::Display for ClusterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "no items to cluster"),
            Self::DimensionMismatch => write!(f, "vectors have differing dimensions"),
            Self::NonFinite => write!(f, "non-finite similarity encountered"),
            Self::InvalidK { k, n } => write!(f, "k = {k} is outside 1..={n}"),
            Self::InvalidConfig(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for ClusterError {}

/// Item-to-cluster mapping with contiguous 0-based labels in canonical
/// order: cluster 0 is item 0's cluster, cluster 1 the next new cluster
/// encountered, and so on. `exemplars[c]`, when present, is the item
/// index representing cluster `c` (affinity propagation only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    pub exemplars: Option<Vec<usize>>,
}

impl ClusterAssignment {
    /// Renumber arbitrary labels into canonical first-occurrence order.
    pub fn from_raw(raw: &[usize], exemplar_of_raw: Option<&[usize]>) -> Self {
        let mut mapping: Vec<usize> = Vec::new(); // raw label, indexed by canonical
        let mut labels = Vec::with_capacity(raw.len());
        for &r in raw {
            let canonical = match mapping.iter().position(|&m| m == r) {
                Some(c) => c,
                None => {
                    mapping.push(r);
                    mapping.len() - 1
                }
            };
            labels.push(canonical);
        }
        let exemplars = exemplar_of_raw.map(|ex| mapping.iter().map(|&r| ex[r]).collect());
        Self { labels, exemplars }
    }

    pub fn n_clusters(&self) -> usize {
        self.labels.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Cluster sizes indexed by label.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0usize; self.n_clusters()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Dense pairwise cosine similarity matrix. The diagonal is reserved for
/// exemplar preferences and starts at 0 until a preference is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SimilarityMatrix {
    /// Pairwise cosines of `vectors`; symmetric by construction.
    pub fn from_cosines(vectors: &[Vec<f64>]) -> Result<Self, ClusterError> {
        let n = vectors.len();
        if n == 0 {
            return Err(ClusterError::Empty);
        }
        let dim = vectors[0].len();
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(ClusterError::DimensionMismatch);
        }
        let mut data = alloc::vec![0.0f64; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let s = cosine(&vectors[i], &vectors[j])
                    .map_err(|_| ClusterError::DimensionMismatch)?;
                if !s.is_finite() {
                    return Err(ClusterError::NonFinite);
                }
                data[i * n + j] = s;
                data[j * n + i] = s;
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    /// Fill the diagonal with a shared preference value.
    pub fn set_diagonal(&mut self, value: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i] = value;
        }
    }

    /// Median of the off-diagonal entries; `None` for a 1x1 matrix.
    pub fn median_off_diagonal(&self) -> Option<f64> {
        if self.n < 2 {
            return None;
        }
        let mut values: Vec<f64> = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in i + 1..self.n {
                values.push(self.get(i, j));
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mid = values.len() / 2;
        Some(if values.len() % 2 == 1 {
            values[mid]
        } else {
            0.5 * (values[mid - 1] + values[mid])
        })
    }
}
