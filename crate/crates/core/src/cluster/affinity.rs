//! Affinity propagation: exemplar election by message passing over a
//! similarity matrix (Frey & Dueck style responsibilities and
//! availabilities), with damped updates.
//!
//! The item count never needs to be known in advance; the preference on
//! the diagonal regulates how many exemplars emerge. Non-convergence is
//! not an error: messages are decoded as-is at the iteration cap and the
//! result carries a `converged` flag.

use alloc::vec;
use alloc::vec::Vec;

use super::{ClusterAssignment, ClusterError, SimilarityMatrix};

/// Diagonal self-similarity controlling cluster granularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preference {
    /// Median of the off-diagonal similarities.
    Median,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApConfig {
    /// Damping factor in [0.5, 1).
    pub damping: f64,
    pub max_iterations: usize,
    /// Iterations the exemplar set must stay unchanged to converge.
    pub convergence_window: usize,
    pub preference: Preference,
}

impl Default for ApConfig {
    fn default() -> Self {
        Self {
            damping: 0.5,
            max_iterations: 200,
            convergence_window: 15,
            preference: Preference::Median,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApResult {
    pub assignment: ClusterAssignment,
    pub converged: bool,
    pub iterations: usize,
}

pub fn affinity_propagation(
    similarities: &SimilarityMatrix,
    config: &ApConfig,
) -> Result<ApResult, ClusterError> {
    if !(0.5..1.0).contains(&config.damping) {
        return Err(ClusterError::InvalidConfig("damping must lie in [0.5, 1)"));
    }
    if config.max_iterations == 0 || config.convergence_window == 0 {
        return Err(ClusterError::InvalidConfig("iteration counts must be positive"));
    }
    let n = similarities.n();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    if n == 1 {
        return Ok(ApResult {
            assignment: ClusterAssignment { labels: vec![0], exemplars: Some(vec![0]) },
            converged: true,
            iterations: 0,
        });
    }

    let mut s = similarities.clone();
    let preference = match config.preference {
        Preference::Median => s.median_off_diagonal().expect("n >= 2"),
        Preference::Fixed(p) => p,
    };
    if !preference.is_finite() {
        return Err(ClusterError::NonFinite);
    }
    s.set_diagonal(preference);

    let lambda = config.damping;
    let mut r = vec![0.0f64; n * n];
    let mut a = vec![0.0f64; n * n];
    let mut prev_exemplars: Vec<usize> = Vec::new();
    let mut stable = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;

    for iter in 1..=config.max_iterations {
        iterations = iter;

        // Responsibilities: r(i,k) <- s(i,k) - max_{k' != k} [a(i,k') + s(i,k')].
        for i in 0..n {
            let mut best = f64::NEG_INFINITY;
            let mut second = f64::NEG_INFINITY;
            let mut best_k = 0usize;
            for k in 0..n {
                let v = a[i * n + k] + s.get(i, k);
                if v > best {
                    second = best;
                    best = v;
                    best_k = k;
                } else if v > second {
                    second = v;
                }
            }
            for k in 0..n {
                let competing = if k == best_k { second } else { best };
                let fresh = s.get(i, k) - competing;
                r[i * n + k] = lambda * r[i * n + k] + (1.0 - lambda) * fresh;
            }
        }

        // Availabilities from positive responsibilities toward each
        // candidate exemplar k.
        for k in 0..n {
            let mut positive_sum = 0.0;
            for i in 0..n {
                if i != k {
                    positive_sum += r[i * n + k].max(0.0);
                }
            }
            for i in 0..n {
                let fresh = if i == k {
                    positive_sum
                } else {
                    let without_i = positive_sum - r[i * n + k].max(0.0);
                    (r[k * n + k] + without_i).min(0.0)
                };
                a[i * n + k] = lambda * a[i * n + k] + (1.0 - lambda) * fresh;
            }
        }

        // Converged once a non-empty exemplar set survives unchanged for
        // the whole window; an empty set means the messages are still
        // ramping up.
        let exemplars = decode_exemplars(&r, &a, n);
        if !exemplars.is_empty() && exemplars == prev_exemplars {
            stable += 1;
            if stable >= config.convergence_window {
                converged = true;
                break;
            }
        } else {
            stable = 0;
            prev_exemplars = exemplars;
        }
    }

    let mut exemplars = decode_exemplars(&r, &a, n);
    if exemplars.is_empty() {
        // No item elected itself; fall back to the single item of maximal
        // preference (smallest index on ties).
        let mut best = 0usize;
        for k in 1..n {
            if s.get(k, k) > s.get(best, best) {
                best = k;
            }
        }
        exemplars = vec![best];
    }

    // Label every item by its most similar exemplar; exemplars label
    // themselves. Ties go to the smaller exemplar index.
    let mut raw = vec![0usize; n];
    for i in 0..n {
        if let Some(slot) = exemplars.iter().position(|&e| e == i) {
            raw[i] = slot;
            continue;
        }
        let mut best_slot = 0usize;
        let mut best_sim = f64::NEG_INFINITY;
        for (slot, &e) in exemplars.iter().enumerate() {
            let sim = s.get(i, e);
            if sim > best_sim {
                best_sim = sim;
                best_slot = slot;
            }
        }
        raw[i] = best_slot;
    }

    Ok(ApResult {
        assignment: ClusterAssignment::from_raw(&raw, Some(&exemplars)),
        converged,
        iterations,
    })
}

fn decode_exemplars(r: &[f64], a: &[f64], n: usize) -> Vec<usize> {
    (0..n).filter(|&k| r[k * n + k] + a[k * n + k] > 0.0).collect()
}
