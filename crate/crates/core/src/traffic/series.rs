//! Measured traffic: a sequence of demand snapshots turned into a capped hose
//! model by taking maxima over a prefix of the series.

use std::io::Read;

use serde::Deserialize;

use super::{CappedHoseModel, DemandMatrix, Peaks};
use crate::topology::Topology;
use crate::{pairs, Error, Result};

/// Snapshots `D^0, D^1, ...` over a fixed node set. Entries are nonnegative
/// and may be asymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandSeries {
    n: usize,
    snapshots: Vec<DemandMatrix>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Row {
    t: u64,
    src: String,
    dst: String,
    demand: f64,
}

impl DemandSeries {
    pub fn new(n: usize, snapshots: Vec<DemandMatrix>) -> Result<Self> {
        for (t, d) in snapshots.iter().enumerate() {
            if d.node_count() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: d.node_count() });
            }
            for i in 0..n {
                for j in 0..n {
                    let v = d.get(i, j);
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::Series(format!("snapshot {t} has invalid demand {v}")));
                    }
                }
            }
        }
        Ok(DemandSeries { n, snapshots })
    }

    /// Reads `t,src,dst,demand` rows. Snapshot `t` covers every row with that
    /// time index; the series length is the largest `t` plus one. Absent
    /// pairs are zero and self-demand rows are ignored.
    pub fn read_csv(reader: impl Read, topology: &Topology) -> Result<Self> {
        let n = topology.node_count();
        let mut snapshots: Vec<DemandMatrix> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for row in csv::Reader::from_reader(reader).deserialize() {
            let row: Row = row?;
            let src = topology.index_of(&row.src).ok_or_else(|| Error::UnknownNode(row.src.clone()))?;
            let dst = topology.index_of(&row.dst).ok_or_else(|| Error::UnknownNode(row.dst.clone()))?;
            if !(row.demand.is_finite() && row.demand >= 0.0) {
                return Err(Error::Series(format!("invalid demand {} at t = {}", row.demand, row.t)));
            }
            if !seen.insert((row.t, src, dst)) {
                return Err(Error::Series(format!("duplicate row t = {}, {} -> {}", row.t, row.src, row.dst)));
            }
            if src == dst {
                continue;
            }
            let t = usize::try_from(row.t).map_err(|_| Error::Series(format!("time index {} too large", row.t)))?;
            if snapshots.len() <= t {
                snapshots.resize(t + 1, DemandMatrix::zeros(n));
            }
            snapshots[t].set(src, dst, row.demand);
        }
        if snapshots.is_empty() {
            return Err(Error::Series("no demand rows".into()));
        }
        Ok(DemandSeries { n, snapshots })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn snapshots(&self) -> &[DemandMatrix] {
        &self.snapshots
    }
}

/// Capped hose model of the first `horizon` snapshots: each snapshot is
/// symmetrized by entrywise max with its transpose, then
/// `U(i,j) = max_t D_ij` and `U(i) = max_t Σ_j D_ij`.
pub fn ingest_time_series(ds: &DemandSeries, horizon: usize) -> Result<CappedHoseModel> {
    if ds.is_empty() {
        return Err(Error::Series("empty series".into()));
    }
    if horizon == 0 || horizon > ds.len() {
        return Err(Error::Horizon { horizon, length: ds.len() });
    }
    let n = ds.node_count();
    let mut peaks = Peaks::zeros(n);
    let mut marginals = vec![0.0f64; n];
    for snapshot in &ds.snapshots[..horizon] {
        let d = snapshot.symmetrized();
        for (i, j) in pairs(n) {
            if d.get(i, j) > peaks.get(i, j) {
                peaks.set(i, j, d.get(i, j));
            }
        }
        for (i, m) in marginals.iter_mut().enumerate() {
            *m = m.max(d.row_sum(i));
        }
    }
    CappedHoseModel::new(marginals, peaks)
}
