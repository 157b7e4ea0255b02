//! Bottom-up agglomerative clustering with Lance-Williams distance
//! updates.
//!
//! Average linkage merges over cosine distance (1 - cosine). Ward
//! linkage runs the Lance-Williams recurrence on squared Euclidean
//! distances between L2-normalized vectors and reports merge heights as
//! the square root of the updated quantity, so a distance threshold has
//! a scale-free meaning regardless of the embedding norms.

use alloc::vec;
use alloc::vec::Vec;

use super::{ClusterAssignment, ClusterError};
use crate::embedding::cosine;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    Average,
    Ward,
}

/// When to stop merging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Merge until exactly `k` clusters remain.
    FixedK(usize),
    /// Stop before the first merge whose linkage distance exceeds the
    /// threshold.
    Threshold(f64),
}

pub fn agglomerative(
    vectors: &[Vec<f64>],
    linkage: Linkage,
    stop: StopRule,
) -> Result<ClusterAssignment, ClusterError> {
    let n = vectors.len();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    let dim = vectors[0].len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(ClusterError::DimensionMismatch);
    }
    let target = match stop {
        StopRule::FixedK(k) => {
            if k == 0 || k > n {
                return Err(ClusterError::InvalidK { k, n });
            }
            Some(k)
        }
        StopRule::Threshold(t) => {
            if !t.is_finite() {
                return Err(ClusterError::InvalidConfig("threshold must be finite"));
            }
            None
        }
    };

    // Pairwise dissimilarities; Ward tracks the squared quantity.
    let mut dist = vec![0.0f64; n * n];
    let normalized: Vec<Vec<f64>>;
    let points: &[Vec<f64>] = match linkage {
        Linkage::Average => vectors,
        Linkage::Ward => {
            normalized = vectors.iter().map(|v| normalize(v)).collect();
            &normalized
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            let d = match linkage {
                Linkage::Average => 1.0 - cosine(&points[i], &points[j]).expect("same dim"),
                Linkage::Ward => squared_euclidean(&points[i], &points[j]),
            };
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let mut active = vec![true; n];
    let mut sizes = vec![1usize; n];
    let mut slot_of_item: Vec<usize> = (0..n).collect();
    let mut remaining = n;

    while remaining > 1 {
        if let Some(k) = target {
            if remaining == k {
                break;
            }
        }
        // Closest active pair, ties broken by smallest (i, j).
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in i + 1..n {
                if !active[j] {
                    continue;
                }
                let d = dist[i * n + j];
                if best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, d) = best.expect("at least two active clusters");
        let height = match linkage {
            Linkage::Average => d,
            Linkage::Ward => libm::sqrt(d.max(0.0)),
        };
        if let StopRule::Threshold(t) = stop {
            if height > t {
                break;
            }
        }

        // Lance-Williams update of distances from the merged cluster
        // (kept in slot i) to every other active cluster.
        let (si, sj) = (sizes[i] as f64, sizes[j] as f64);
        for x in 0..n {
            if !active[x] || x == i || x == j {
                continue;
            }
            let dix = dist[i * n + x];
            let djx = dist[j * n + x];
            let updated = match linkage {
                Linkage::Average => (si * dix + sj * djx) / (si + sj),
                Linkage::Ward => {
                    let sx = sizes[x] as f64;
                    ((si + sx) * dix + (sj + sx) * djx - sx * d) / (si + sj + sx)
                }
            };
            dist[i * n + x] = updated;
            dist[x * n + i] = updated;
        }
        sizes[i] += sizes[j];
        active[j] = false;
        for slot in slot_of_item.iter_mut() {
            if *slot == j {
                *slot = i;
            }
        }
        remaining -= 1;
    }

    Ok(ClusterAssignment::from_raw(&slot_of_item, None))
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    if norm == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / norm).collect()
}

fn squared_euclidean(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum()
}
