use super::CappedHoseModel;
use crate::pairs;

/// How binding node `i`'s marginal is within its relevance interval
/// `[max_j U(i,j), Σ_j U(i,j)]`: 1 at the lower end, 0 at the upper end.
///
/// A point interval (at most one positive peak) yields 0, and a marginal
/// below the interval saturates at 1.
pub fn marginal_strength(m: &CappedHoseModel, i: usize) -> f64 {
    let sum = m.peaks().row_sum(i);
    let max = m.peaks().row_max(i);
    let width = sum - max;
    if width <= 0.0 {
        return 0.0;
    }
    let truncated = m.marginal(i).min(sum);
    (1.0 - (truncated - max) / width).clamp(0.0, 1.0)
}

/// How binding the peak `U(i,j)` is relative to `min(U(i), U(j))`; 0 when
/// either marginal is zero.
pub fn peak_strength(m: &CappedHoseModel, i: usize, j: usize) -> f64 {
    let bound = m.marginal(i).min(m.marginal(j));
    if bound <= 0.0 {
        return 0.0;
    }
    1.0 - m.peak(i, j).min(bound) / bound
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrengthVectors {
    /// Per node.
    pub mu: Vec<f64>,
    /// Per unordered pair, in [`crate::pair_index`] order.
    pub pi: Vec<f64>,
    pub mu_norm: f64,
    pub pi_norm: f64,
}

pub fn strength_vectors(m: &CappedHoseModel) -> StrengthVectors {
    let n = m.node_count();
    let mu: Vec<f64> = (0..n).map(|i| marginal_strength(m, i)).collect();
    let pi: Vec<f64> = pairs(n).map(|(i, j)| peak_strength(m, i, j)).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    StrengthVectors { mu_norm: norm(&mu), pi_norm: norm(&pi), mu, pi }
}
