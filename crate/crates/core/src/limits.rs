//! Enumeration caps and the deterministic sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Bounds shared by every exhaustive scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest |Π| for which closed stack sets are enumerated.
    pub max_enum: usize,
    /// Largest |Π| for the brute-force subset scan.
    pub max_brute_force: usize,
    /// Predicate spaces up to this size are scanned exhaustively.
    pub predicate_cap: usize,
    /// Largest interpreted function space in the higher-order semantics.
    pub function_space_cap: usize,
    /// Application-node bound for enumerated combinator terms.
    pub term_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enum: 16,
            max_brute_force: 12,
            predicate_cap: 4096,
            function_space_cap: 4096,
            term_nodes: 4,
        }
    }
}

/// How a family of predicate pairs is covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coverage {
    /// Every pair when the predicate space fits under the cap, else
    /// `fallback_samples` seeded pairs.
    Auto { fallback_samples: usize, seed: u64 },
    /// Exactly `samples` pairs drawn from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

impl Default for Coverage {
    fn default() -> Self {
        Coverage::Auto {
            fallback_samples: 1000,
            seed: 0,
        }
    }
}

impl Coverage {
    /// Index pairs `(i, j)` over a space of `n` predicates.
    pub fn pairs(&self, n: usize, cap: usize) -> Vec<(usize, usize)> {
        match *self {
            Coverage::Auto { .. } if n <= cap => {
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
            }
            Coverage::Auto {
                fallback_samples,
                seed,
            } => sample_pairs(n, fallback_samples, seed),
            Coverage::Sampled { samples, seed } => sample_pairs(n, samples, seed),
        }
    }

    pub fn is_exhaustive(&self, n: usize, cap: usize) -> bool {
        matches!(self, Coverage::Auto { .. }) && n <= cap
    }

    /// Index tuples of the given arity over a space of `n` items: all of
    /// them when `n^arity` fits under `cap` (and coverage is automatic),
    /// seeded samples otherwise.
    pub fn tuples(&self, n: usize, arity: usize, cap: usize) -> Vec<Vec<usize>> {
        let dims = vec![n; arity];
        if n == 0 && arity > 0 {
            return Vec::new();
        }
        let samples = match *self {
            Coverage::Auto { .. } if self.note(n, arity, cap).is_none() => {
                let total = crate::exec::grid_size(&dims).unwrap_or(0);
                return (0..total).map(|i| crate::exec::decode(i, &dims)).collect();
            }
            Coverage::Auto { fallback_samples, .. } => fallback_samples,
            Coverage::Sampled { samples, .. } => samples,
        };
        let mut rng = sampler(self.seed());
        (0..samples)
            .map(|_| (0..arity).map(|_| rng.random_range(0..n)).collect())
            .collect()
    }

    pub fn seed(&self) -> u64 {
        match *self {
            Coverage::Auto { seed, .. } | Coverage::Sampled { seed, .. } => seed,
        }
    }

    /// Human-readable coverage note, `None` when the scan is exhaustive.
    pub fn note(&self, n: usize, arity: usize, cap: usize) -> Option<String> {
        let total = (n as u128).checked_pow(arity as u32);
        match *self {
            _ if n == 0 && arity > 0 => None,
            Coverage::Auto { .. } if total.is_some_and(|t| t <= cap as u128) => None,
            Coverage::Auto { fallback_samples: k, seed } | Coverage::Sampled { samples: k, seed } => {
                Some(format!("sampled {k} of {n}^{arity} tuples, seed {seed}"))
            }
        }
    }
}

/// The single seeded generator used for every sampled scan.
pub fn sampler(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_pairs(n: usize, samples: usize, seed: u64) -> Vec<(usize, usize)> {
    if n == 0 {
        return Vec::new();
    }
    let mut rng = sampler(seed);
    (0..samples)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect()
}
