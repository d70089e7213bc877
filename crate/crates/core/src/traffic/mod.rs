//! The capped hose demand universe and the generators that instantiate it.

mod generate;
mod series;
mod strength;

use crate::{pair_index, pairs, Error, Result, TOLERANCE};

pub use generate::{
    gravity_peaks, sample_marginals, sigma_vectors, SigmaVectors, SweepConfig, DEFAULT_SAMPLE_CAP,
};
pub use series::{ingest_time_series, DemandSeries};
pub use strength::{marginal_strength, peak_strength, strength_vectors, StrengthVectors};

/// Symmetric peak demands `U(i,j)` over unordered pairs, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Peaks {
    n: usize,
    values: Vec<f64>,
}

impl Peaks {
    /// All-zero peaks over `n` nodes.
    pub fn zeros(n: usize) -> Self {
        Peaks { n, values: vec![0.0; n * n.saturating_sub(1) / 2] }
    }

    /// Builds peaks from `f(i, j)` evaluated once per pair `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let values: Vec<f64> = pairs(n).map(|(i, j)| f(i, j)).collect();
        Self::from_values(n, values)
    }

    /// Builds peaks from values listed in [`crate::pair_index`] order.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch { expected: n * n.saturating_sub(1) / 2, actual: values.len() });
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidModel(format!("peak demand {v} is not a nonnegative number")));
        }
        Ok(Peaks { n, values })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// `U(i,j)`; zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.values[pair_index(self.n, i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i != j, "no self-demand");
        self.values[pair_index(self.n, i, j)] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Σ_j U(i,j)`.
    pub fn row_sum(&self, i: usize) -> f64 {
        (0..self.n).filter(|&j| j != i).map(|j| self.get(i, j)).sum()
    }

    /// `max_j U(i,j)`, zero for an isolated node.
    pub fn row_max(&self, i: usize) -> f64 {
        (0..self.n).filter(|&j| j != i).map(|j| self.get(i, j)).fold(0.0, f64::max)
    }
}

/// Marginals `U(i)` plus peaks `U(i,j)`: the set of symmetric nonnegative
/// matrices `D` with zero diagonal, `D_ij <= U(i,j)` and `Σ_j D_ij <= U(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CappedHoseModel {
    marginals: Vec<f64>,
    peaks: Peaks,
}

impl CappedHoseModel {
    pub fn new(marginals: Vec<f64>, peaks: Peaks) -> Result<Self> {
        if marginals.len() != peaks.node_count() {
            return Err(Error::DimensionMismatch { expected: peaks.node_count(), actual: marginals.len() });
        }
        if let Some(v) = marginals.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidModel(format!("marginal {v} is not a nonnegative number")));
        }
        Ok(CappedHoseModel { marginals, peaks })
    }

    pub fn node_count(&self) -> usize {
        self.marginals.len()
    }

    pub fn marginal(&self, i: usize) -> f64 {
        self.marginals[i]
    }

    pub fn marginals(&self) -> &[f64] {
        &self.marginals
    }

    pub fn peak(&self, i: usize, j: usize) -> f64 {
        self.peaks.get(i, j)
    }

    pub fn peaks(&self) -> &Peaks {
        &self.peaks
    }

    /// `trunc(U(i)) = min(U(i), Σ_j U(i,j))`: the most demand node `i` can
    /// ever source.
    pub fn truncated_marginal(&self, i: usize) -> f64 {
        self.marginals[i].min(self.peaks.row_sum(i))
    }

    /// Whether `d` lies in the universe, up to [`TOLERANCE`] absolute.
    pub fn check_membership(&self, d: &DemandMatrix) -> Result<bool> {
        let n = self.node_count();
        if d.node_count() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: d.node_count() });
        }
        for i in 0..n {
            if d.get(i, i).abs() > TOLERANCE {
                return Ok(false);
            }
            let mut row = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let v = d.get(i, j);
                if v < -TOLERANCE || (v - d.get(j, i)).abs() > TOLERANCE || v > self.peak(i, j) + TOLERANCE {
                    return Ok(false);
                }
                row += v;
            }
            if row > self.marginals[i] + TOLERANCE {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A dense square demand matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DemandMatrix {
    pub fn zeros(n: usize) -> Self {
        DemandMatrix { n, values: vec![0.0; n * n] }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.values[i * self.n + j] = value;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_symmetric(&mut self, i: usize, j: usize, value: f64) {
        self.set(i, j, value);
        self.set(j, i, value);
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.values[i * self.n..(i + 1) * self.n].iter().sum()
    }

    /// `D~_ij = max(D_ij, D_ji)`, diagonal cleared.
    pub fn symmetrized(&self) -> DemandMatrix {
        let mut out = DemandMatrix::zeros(self.n);
        for (i, j) in pairs(self.n) {
            out.set_symmetric(i, j, self.get(i, j).max(self.get(j, i)));
        }
        out
    }
}
