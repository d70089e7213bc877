//! Synthetic instances: gravity-model peaks and grid-sampled marginals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Peaks;
use crate::topology::Topology;
use crate::{Error, Result};

/// Largest number of σ vectors enumerated exhaustively when no explicit
/// sample count is configured.
pub const DEFAULT_SAMPLE_CAP: u64 = 10_000;

/// Gravity-model peaks `U(i,j) = P(i) P(j) / distance(i,j)^exponent`.
pub fn gravity_peaks(t: &Topology, exponent: i32) -> Result<Peaks> {
    let n = t.node_count();
    let population = |v: usize| {
        t.node(v).population.ok_or_else(|| Error::MissingPopulation(t.id(v).to_string()))
    };
    let mut peaks = Peaks::zeros(n);
    for i in 0..n {
        let pi = population(i)?;
        for j in i + 1..n {
            let pj = population(j)?;
            let d = t.geo_distance(i, j)?;
            if d <= 0.0 {
                return Err(Error::ZeroDistance(t.id(i).to_string(), t.id(j).to_string()));
            }
            peaks.set(i, j, pi * pj / d.powi(exponent));
        }
    }
    Ok(peaks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Grid steps per relevance interval.
    pub s: u32,
    /// Length of the short σ vector.
    pub k: u32,
    pub seed: u64,
    /// Enumeration cap; above it this many σ vectors are drawn instead.
    pub sample_count: Option<u64>,
    /// Distance exponent of the gravity model.
    pub gravity_exponent: i32,
}

impl SweepConfig {
    pub fn new(s: u32, k: u32, seed: u64) -> Self {
        SweepConfig { s, k, seed, sample_count: None, gravity_exponent: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidConfig("s must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if self.sample_count == Some(0) {
            return Err(Error::InvalidConfig("sample count must be positive".into()));
        }
        if !matches!(self.gravity_exponent, 1 | 2) {
            return Err(Error::InvalidConfig("gravity exponent must be 1 or 2".into()));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// The σ vectors of one sweep, in instance order.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaVectors {
    /// Every vector of `{0..s}^k` in lexicographic order.
    Enumerated { s: u32, k: u32, total: u64 },
    /// Uniform draws, used when `(s+1)^k` exceeds the cap.
    Sampled(Vec<Vec<u32>>),
}

impl SigmaVectors {
    pub fn len(&self) -> u64 {
        match self {
            SigmaVectors::Enumerated { total, .. } => *total,
            SigmaVectors::Sampled(v) => v.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: u64) -> Vec<u32> {
        match self {
            SigmaVectors::Enumerated { s, k, .. } => {
                let base = u64::from(*s) + 1;
                let mut sigma = vec![0; *k as usize];
                let mut rest = index;
                for slot in sigma.iter_mut().rev() {
                    *slot = (rest % base) as u32;
                    rest /= base;
                }
                sigma
            }
            SigmaVectors::Sampled(v) => v[index as usize].clone(),
        }
    }
}

/// Lists the σ vectors of a sweep: exhaustive when `(s+1)^k` fits under the
/// cap, otherwise `cap` seeded uniform draws.
pub fn sigma_vectors(cfg: &SweepConfig) -> Result<SigmaVectors> {
    cfg.validate()?;
    let cap = cfg.sample_count.unwrap_or(DEFAULT_SAMPLE_CAP);
    match (u64::from(cfg.s) + 1).checked_pow(cfg.k) {
        Some(total) if total <= cap => Ok(SigmaVectors::Enumerated { s: cfg.s, k: cfg.k, total }),
        _ => {
            let mut rng = cfg.rng(0);
            let vectors = (0..cap)
                .map(|_| (0..cfg.k).map(|_| rng.random_range(0..=cfg.s)).collect())
                .collect();
            Ok(SigmaVectors::Sampled(vectors))
        }
    }
}

/// Instantiates marginals from a σ vector: node `i` draws a slot of σ
/// uniformly and lands at that grid point of its relevance interval.
///
/// Each node draws from its own stream keyed by `(seed, instance, node)`, so
/// results do not depend on evaluation order.
pub fn sample_marginals(peaks: &Peaks, cfg: &SweepConfig, sigma: &[u32], instance: u64) -> Result<Vec<f64>> {
    cfg.validate()?;
    if sigma.len() != cfg.k as usize {
        return Err(Error::InvalidConfig(format!("σ has length {}, expected {}", sigma.len(), cfg.k)));
    }
    if let Some(v) = sigma.iter().find(|&&v| v > cfg.s) {
        return Err(Error::InvalidConfig(format!("σ entry {v} exceeds s = {}", cfg.s)));
    }
    let marginals = (0..peaks.node_count())
        .map(|i| {
            let mut rng = cfg.rng(instance + 1);
            rng.set_word_pos((i as u128) << 32);
            let step = sigma[rng.random_range(0..sigma.len())];
            let low = peaks.row_max(i);
            let high = peaks.row_sum(i);
            if step == cfg.s {
                high
            } else {
                low + f64::from(step) / f64::from(cfg.s) * (high - low)
            }
        })
        .collect();
    Ok(marginals)
}
