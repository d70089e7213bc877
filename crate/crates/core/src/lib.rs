//! Robust network design under the capped hose traffic model.
//!
//! Given an undirected, cost-weighted topology and a demand universe bounded by
//! per-node marginals and per-pair peak demands, this crate builds oblivious
//! routing templates (shortest path, single hub, in-graph tree and
//! hierarchical hub), computes the worst-case capacity each template needs on
//! every link, and prices the result. The [`harness`] module drives whole
//! experimental sweeps over generated or measured traffic.

pub mod demand_oracle;
pub mod error;
pub mod evaluation;
mod flow;
pub mod harness;
pub mod hub_routing;
pub mod topology;
pub mod traffic;

pub use error::{Error, Result};

/// Absolute tolerance used when comparing flow values and demand bounds.
pub const TOLERANCE: f64 = 1e-9;

/// Index of the unordered pair `{i, j}` (`i != j`) in a row-major upper
/// triangle over `n` nodes.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Iterates all unordered pairs `(i, j)` with `i < j`, in [`pair_index`] order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}
