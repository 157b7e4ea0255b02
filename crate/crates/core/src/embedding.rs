//! Immutable in-memory store of pre-trained word vectors with cosine
//! similarity and nearest-neighbor queries.
//!
//! Vectors are kept exactly as loaded; normalization is a query-time
//! concern so that raw vectors stay available for arithmetic like the
//! subtraction step of prototype induction. Token lookup is exact and
//! case-sensitive; callers decide about case folding.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingError {
    InvalidDimension,
    DimensionMismatch { expected: usize, got: usize },
    NonFiniteComponent { token: String },
    DuplicateToken { token: String },
}

impl fmt::Display for EmbeddingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidDimension => write!(f, "embedding dimension must be positive"),
            Self::DimensionMismatch { expected, got } => {
                write!(f, "vector dimension {got} does not match store dimension {expected}")
            }
            Self::NonFiniteComponent { token } => {
                write!(f, "non-finite component in vector for token '{token}'")
            }
            Self::DuplicateToken { token } => write!(f, "duplicate token '{token}'"),
        }
    }
}

impl core::error::Error for EmbeddingError {}

/// Token ranked by similarity to some query vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    pub token: String,
    pub similarity: f64,
}

/// Immutable token -> dense vector map of fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    entries: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingStore {
    pub fn new(dim: usize) -> Result<Self, EmbeddingError> {
        if dim == 0 {
            return Err(EmbeddingError::InvalidDimension);
        }
        Ok(Self { dim, entries: BTreeMap::new() })
    }

    pub fn insert(&mut self, token: String, vector: Vec<f64>) -> Result<(), EmbeddingError> {
        if vector.len() != self.dim {
            return Err(EmbeddingError::DimensionMismatch {
                expected: self.dim,
                got: vector.len(),
            });
        }
        if !vector.iter().all(|x| x.is_finite()) {
            return Err(EmbeddingError::NonFiniteComponent { token });
        }
        if self.entries.contains_key(&token) {
            return Err(EmbeddingError::DuplicateToken { token });
        }
        self.entries.insert(token, vector);
        Ok(())
    }

    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (String, Vec<f64>)>,
    {
        let mut store = Self::new(dim)?;
        for (token, vector) in entries {
            store.insert(token, vector)?;
        }
        Ok(store)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.entries.get(token).map(|v| v.as_slice())
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    /// Tokens in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.entries.iter().map(|(t, v)| (t.as_str(), v.as_slice()))
    }

    /// Top-`k` tokens by cosine similarity to `query`, excluding `exclude`.
    ///
    /// Results are sorted by similarity descending, ties broken by token
    /// ascending; fewer than `k` are returned when the vocabulary runs out.
    pub fn nearest_neighbors(
        &self,
        query: &[f64],
        k: usize,
        exclude: &[&str],
    ) -> Result<Vec<Neighbor>, EmbeddingError> {
        if query.len() != self.dim {
            return Err(EmbeddingError::DimensionMismatch {
                expected: self.dim,
                got: query.len(),
            });
        }
        let mut ranked: Vec<Neighbor> = self
            .entries
            .iter()
            .filter(|(t, _)| !exclude.contains(&t.as_str()))
            .map(|(t, v)| Neighbor {
                token: t.clone(),
                similarity: cosine(query, v).expect("store vectors share the query dimension"),
            })
            .collect();
        // BTreeMap iteration is token-ascending, so a stable sort by
        // similarity leaves ties in token order.
        ranked.sort_by(|a, b| b.similarity.partial_cmp(&a.similarity).expect("finite"));
        ranked.truncate(k);
        Ok(ranked)
    }
}

/// Cosine similarity `u.v / (|u||v|)`; zero whenever either norm is zero,
/// so all-out-of-vocabulary context vectors flow through without faults.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, EmbeddingError> {
    if u.len() != v.len() {
        return Err(EmbeddingError::DimensionMismatch { expected: u.len(), got: v.len() });
    }
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (a, b) in u.iter().zip(v.iter()) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok(dot / (libm::sqrt(nu) * libm::sqrt(nv)))
}
