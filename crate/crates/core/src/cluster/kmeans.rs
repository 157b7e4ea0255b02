//! Lloyd's k-means with k-means++ seeding from a [`SplitMix64`] stream.
//!
//! Deterministic for a given (vectors, k, seed): seeding consumes the
//! stream in a fixed order, assignment ties go to the smaller centroid
//! index, and empty clusters are repaired by stealing the point farthest
//! from its centroid.

use alloc::vec;
use alloc::vec::Vec;

use super::{ClusterAssignment, ClusterError};
use crate::rng::SplitMix64;

const MAX_ITERATIONS: usize = 300;

pub fn kmeans(
    vectors: &[Vec<f64>],
    k: usize,
    seed: u64,
) -> Result<ClusterAssignment, ClusterError> {
    let (labels, _) = lloyd(vectors, k, seed)?;
    Ok(ClusterAssignment::from_raw(&labels, None))
}

/// Core iteration, also reporting the within-cluster sum of squares after
/// every pass; the trace is non-increasing.
pub(crate) fn lloyd(
    vectors: &[Vec<f64>],
    k: usize,
    seed: u64,
) -> Result<(Vec<usize>, Vec<f64>), ClusterError> {
    let n = vectors.len();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    if k == 0 || k > n {
        return Err(ClusterError::InvalidK { k, n });
    }
    let dim = vectors[0].len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(ClusterError::DimensionMismatch);
    }

    let mut rng = SplitMix64::new(seed);
    let mut centroids = seed_plus_plus(vectors, k, &mut rng);
    let mut labels = vec![0usize; n];
    let mut trace = Vec::new();

    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for (i, v) in vectors.iter().enumerate() {
            let nearest = nearest_centroid(v, &centroids);
            if labels[i] != nearest {
                labels[i] = nearest;
                changed = true;
            }
        }

        // Repair empty clusters before recomputing the means.
        loop {
            let mut counts = vec![0usize; k];
            for &l in &labels {
                counts[l] += 1;
            }
            let Some(empty) = counts.iter().position(|&c| c == 0) else { break };
            let mut victim = None;
            let mut worst = -1.0;
            for (i, v) in vectors.iter().enumerate() {
                if counts[labels[i]] < 2 {
                    continue; // do not empty a singleton
                }
                let d = squared_distance(v, &centroids[labels[i]]);
                if d > worst {
                    worst = d;
                    victim = Some(i);
                }
            }
            let victim = victim.expect("n >= k guarantees a donor cluster");
            labels[victim] = empty;
            centroids[empty] = vectors[victim].clone();
            changed = true;
        }

        for (c, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<&Vec<f64>> = vectors
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == c)
                .map(|(v, _)| v)
                .collect();
            centroid.iter_mut().for_each(|x| *x = 0.0);
            for m in &members {
                for (slot, x) in centroid.iter_mut().zip(m.iter()) {
                    *slot += x;
                }
            }
            let count = members.len() as f64;
            centroid.iter_mut().for_each(|x| *x /= count);
        }

        trace.push(
            vectors
                .iter()
                .zip(&labels)
                .map(|(v, &l)| squared_distance(v, &centroids[l]))
                .sum(),
        );
        if !changed {
            break;
        }
    }
    Ok((labels, trace))
}

/// k-means++: first center uniform, then each next center sampled with
/// probability proportional to its squared distance from the chosen set.
fn seed_plus_plus(vectors: &[Vec<f64>], k: usize, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    let n = vectors.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    chosen.push(rng.next_below(n));
    let mut d2: Vec<f64> =
        vectors.iter().map(|v| squared_distance(v, &vectors[chosen[0]])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total <= 0.0 {
            // All remaining points coincide with a center; take the
            // smallest unchosen index.
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n")
        } else {
            let mut r = rng.next_f64() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if r < w {
                    pick = i;
                    break;
                }
                r -= w;
            }
            pick
        };
        chosen.push(next);
        for (i, v) in vectors.iter().enumerate() {
            let d = squared_distance(v, &vectors[next]);
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    chosen.into_iter().map(|i| vectors[i].clone()).collect()
}

fn nearest_centroid(v: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0usize;
    let mut best_d = squared_distance(v, &centroids[0]);
    for (c, centroid) in centroids.iter().enumerate().skip(1) {
        let d = squared_distance(v, centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

fn squared_distance(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_blobs() -> Vec<Vec<f64>> {
        let mut v = Vec::new();
        for i in 0..10 {
            v.push(vec![0.0 + 0.01 * i as f64, 0.0]);
        }
        for i in 0..10 {
            v.push(vec![10.0 + 0.01 * i as f64, 10.0]);
        }
        v
    }

    #[test]
    fn k_one_centroid_is_the_mean() {
        let v = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 3.0]];
        let (labels, trace) = lloyd(&v, 1, 9).unwrap();
        assert_eq!(labels, vec![0, 0, 0]);
        // WCSS against the mean (1, 1): 1+1 + 1+1 + 0+4 = 8.
        assert!((trace.last().unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let v = vec![vec![0.0], vec![1.0], vec![5.0], vec![9.0]];
        let got = kmeans(&v, 4, 1234).unwrap();
        assert_eq!(got.n_clusters(), 4);
        assert_eq!(got.sizes(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn separated_blobs_recovered_exactly() {
        let got = kmeans(&two_blobs(), 2, 7).unwrap();
        assert_eq!(got.labels[..10], [0; 10]);
        assert_eq!(got.labels[10..], [1; 10]);
    }

    #[test]
    fn deterministic_per_seed() {
        let v = two_blobs();
        assert_eq!(kmeans(&v, 2, 3).unwrap(), kmeans(&v, 2, 3).unwrap());
        // A couple of different seeds on well-separated blobs still agree.
        assert_eq!(kmeans(&v, 2, 3).unwrap(), kmeans(&v, 2, 99).unwrap());
    }

    #[test]
    fn wcss_never_increases() {
        let mut points = Vec::new();
        let mut rng = SplitMix64::new(5);
        for _ in 0..40 {
            points.push(vec![rng.next_f64() * 4.0, rng.next_f64() * 4.0, rng.next_f64()]);
        }
        for seed in 0..5 {
            let (_, trace) = lloyd(&points, 4, seed).unwrap();
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "wcss increased: {:?}", w);
            }
        }
    }

    #[test]
    fn no_empty_clusters_even_with_duplicates() {
        // 6 points, only 2 distinct locations, k = 3 forces a repair.
        let v = vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![5.0, 5.0],
            vec![5.0, 5.0],
            vec![5.0, 5.0],
        ];
        for seed in 0..10 {
            let got = kmeans(&v, 3, seed).unwrap();
            assert_eq!(got.n_clusters(), 3);
            assert!(got.sizes().iter().all(|&s| s > 0));
        }
    }

    #[test]
    fn rejects_invalid_k() {
        let v = vec![vec![1.0], vec![2.0]];
        assert!(matches!(kmeans(&v, 0, 1), Err(ClusterError::InvalidK { .. })));
        assert!(matches!(kmeans(&v, 3, 1), Err(ClusterError::InvalidK { .. })));
    }
}
