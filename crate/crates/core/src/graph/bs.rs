use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::{ball, canonical_form, rooted_isomorphic, Graph, RootedGraph};

/// Outcome of comparing two rooted graphs ball by ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BsDistance {
    /// Balls agree at every radius up to both eccentricities: `Δ = 0`.
    Isomorphic,
    /// Balls agree up to `radius` and differ at `radius + 1`: `Δ = 1/(1 + radius)`.
    Agree { radius: usize },
    /// Balls agree up to the search limit only: `Δ ≤ 1/(1 + radius)`.
    Truncated { radius: usize },
}

impl BsDistance {
    /// The distance value; for truncated searches this is the upper bound.
    pub fn value(&self) -> f64 {
        match *self {
            BsDistance::Isomorphic => 0.0,
            BsDistance::Agree { radius } | BsDistance::Truncated { radius } => 1.0 / (1.0 + radius as f64),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, BsDistance::Truncated { .. })
    }
}

/// Benjamini–Schramm distance, checking root-preserving isomorphism of balls of radius `0..=k_max`.
pub fn bs_distance(a: &RootedGraph, b: &RootedGraph, k_max: usize) -> BsDistance {
    for k in 1..=k_max {
        let ba = ball(&a.graph, a.root, k).expect("root is valid");
        let bb = ball(&b.graph, b.root, k).expect("root is valid");
        if !rooted_isomorphic(&ba, &bb) {
            return BsDistance::Agree { radius: k - 1 };
        }
    }
    let ecc = a.graph.eccentricity(a.root).max(b.graph.eccentricity(b.root));
    if k_max >= ecc {
        BsDistance::Isomorphic
    } else {
        BsDistance::Truncated { radius: k_max }
    }
}

/// Which roots a neighbourhood census visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every vertex once.
    All,
    /// `count` roots drawn uniformly with replacement from a seeded ChaCha8 stream.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusClass {
    pub canonical_key: String,
    pub mass_numerator: u64,
    pub mass_denominator: u64,
}

/// Empirical law of the isomorphism class of `ball(G, v, k)` for a uniform root `v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusDistribution {
    /// Classes sorted by key.
    pub classes: Vec<CensusClass>,
    /// Total-variation distance to the previous graph's distribution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tv_to_previous: Option<f64>,
}

impl CensusDistribution {
    pub fn mass_of(&self, key: &str) -> f64 {
        self.classes
            .iter()
            .find(|c| c.canonical_key == key)
            .map_or(0.0, |c| c.mass_numerator as f64 / c.mass_denominator as f64)
    }

    pub fn total_variation(&self, other: &CensusDistribution) -> f64 {
        let mut masses: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
        for c in &self.classes {
            masses.entry(&c.canonical_key).or_default().0 = c.mass_numerator as f64 / c.mass_denominator as f64;
        }
        for c in &other.classes {
            masses.entry(&c.canonical_key).or_default().1 = c.mass_numerator as f64 / c.mass_denominator as f64;
        }
        0.5 * masses.values().map(|(p, q)| (p - q).abs()).sum::<f64>()
    }
}

/// Per-graph distribution of radius-`k` ball classes, with total-variation
/// distances between consecutive graphs.
pub fn neighborhood_census(graphs: &[Graph], k: usize, sampling: Sampling) -> Result<Vec<CensusDistribution>> {
    let mut out: Vec<CensusDistribution> = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        if g.is_empty() {
            return Err(invalid(format!("graph {i} has no vertices")));
        }
        let roots: Vec<usize> = match sampling {
            Sampling::All => (0..g.len()).collect(),
            Sampling::Sampled { count, seed } => {
                if count == 0 {
                    return Err(invalid("sample count must be positive"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                (0..count).map(|_| rng.random_range(0..g.len())).collect()
            }
        };
        let keys: Vec<String> = roots
            .par_iter()
            .map(|&v| canonical_form(&ball(g, v, k).expect("root in range")).key())
            .collect();
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for key in keys {
            *counts.entry(key).or_default() += 1;
        }
        let denom = roots.len() as u64;
        let mut dist = CensusDistribution {
            classes: counts
                .into_iter()
                .map(|(canonical_key, c)| CensusClass {
                    canonical_key,
                    mass_numerator: c,
                    mass_denominator: denom,
                })
                .collect(),
            tv_to_previous: None,
        };
        if let Some(prev) = out.last() {
            dist.tv_to_previous = Some(dist.total_variation(prev));
        }
        out.push(dist);
    }
    Ok(out)
}
