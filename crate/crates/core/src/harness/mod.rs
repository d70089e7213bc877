//! Batch experiments: evaluate SP, HH and single-hub designs over generated
//! or measured capped hose instances and record one CSV row per instance.

mod summary;

pub use summary::{summarize, HubSplit, Summary};

use std::io::{Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::evaluation::{best_single_hub, hh_capacities, link_cost, node_costs, sp_template, template_capacities};
use crate::hub_routing::{btsm, place_hubs, RoutingTemplate};
use crate::topology::{ShortestPathIndex, Topology};
use crate::traffic::{
    gravity_peaks, ingest_time_series, sample_marginals, sigma_vectors, strength_vectors, CappedHoseModel, DemandSeries,
    SweepConfig,
};
use crate::{Error, Result};

/// One output row. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance_id: u64,
    /// σ entries joined by `-`, or `timeseries:<horizon>`.
    pub sigma: String,
    pub mu_norm: f64,
    pub pi_norm: f64,
    pub sp_link_cost: f64,
    pub hh_link_cost: f64,
    pub hub_link_cost: f64,
    pub sp_node_cost: f64,
    pub hh_node_cost: f64,
    pub cost_ratio: f64,
    pub distinct_hubs: usize,
    pub elapsed_ms: u64,
}

pub const CSV_HEADER: &str = "instance_id,sigma,mu_norm,pi_norm,sp_link_cost,hh_link_cost,hub_link_cost,\
sp_node_cost,hh_node_cost,cost_ratio,distinct_hubs,elapsed_ms";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall-clock time per instance. Off by default so that output
    /// only depends on the inputs.
    pub record_timing: bool,
}

/// Costs of the three designs on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub mu_norm: f64,
    pub pi_norm: f64,
    pub sp_link_cost: f64,
    pub hh_link_cost: f64,
    pub hub_link_cost: f64,
    pub sp_node_cost: f64,
    pub hh_node_cost: f64,
    pub distinct_hubs: usize,
}

impl Evaluation {
    /// `sp / hh`, with `1` when both are zero and `+inf` when only HH is free.
    pub fn cost_ratio(&self) -> f64 {
        if self.hh_link_cost > 0.0 {
            self.sp_link_cost / self.hh_link_cost
        } else if self.sp_link_cost > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }

    fn into_record(self, instance_id: u64, sigma: String, elapsed_ms: u64) -> InstanceRecord {
        InstanceRecord {
            instance_id,
            sigma,
            mu_norm: self.mu_norm,
            pi_norm: self.pi_norm,
            sp_link_cost: self.sp_link_cost,
            hh_link_cost: self.hh_link_cost,
            hub_link_cost: self.hub_link_cost,
            sp_node_cost: self.sp_node_cost,
            hh_node_cost: self.hh_node_cost,
            cost_ratio: self.cost_ratio(),
            distinct_hubs: self.distinct_hubs,
            elapsed_ms,
        }
    }
}

/// Per-topology state shared by all instances.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    topology: &'a Topology,
    idx: ShortestPathIndex,
    sp: RoutingTemplate,
}

impl<'a> Evaluator<'a> {
    pub fn new(topology: &'a Topology) -> Self {
        let idx = ShortestPathIndex::new(topology);
        let sp = sp_template(&idx);
        Evaluator { topology, idx, sp }
    }

    pub fn shortest_paths(&self) -> &ShortestPathIndex {
        &self.idx
    }

    pub fn evaluate(&self, m: &CappedHoseModel) -> Result<Evaluation> {
        let t = self.topology;
        let strengths = strength_vectors(m);
        let sp = template_capacities(m, &self.sp, t)?;
        let mut tree = btsm(m)?;
        tree.populate_capacities(m)?;
        let placement = place_hubs(&tree, &self.idx)?;
        let hh = hh_capacities(&tree, &placement.map, &self.idx, t)?;
        let (_, hub_link_cost) = best_single_hub(m, &self.idx);
        Ok(Evaluation {
            mu_norm: strengths.mu_norm,
            pi_norm: strengths.pi_norm,
            sp_link_cost: link_cost(&sp, t),
            hh_link_cost: placement.cost,
            hub_link_cost,
            sp_node_cost: node_costs(&sp, t).iter().sum(),
            hh_node_cost: node_costs(&hh, t).iter().sum(),
            distinct_hubs: placement.map.distinct_hubs(&tree),
        })
    }
}

fn timed<T>(options: RunOptions, f: impl FnOnce() -> Result<T>) -> Result<(T, u64)> {
    let start = Instant::now();
    let value = f()?;
    let ms = if options.record_timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok((value, ms))
}

pub fn sigma_label(sigma: &[u32]) -> String {
    sigma.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
}

pub fn run_sweep(t: &Topology, cfg: &SweepConfig) -> Result<Vec<InstanceRecord>> {
    run_sweep_with(t, cfg, RunOptions::default())
}

/// Gravity peaks fixed once, then one instance per σ vector with marginals
/// sampled from it. Instances run in parallel on the current rayon pool and
/// come back in instance order.
pub fn run_sweep_with(t: &Topology, cfg: &SweepConfig, options: RunOptions) -> Result<Vec<InstanceRecord>> {
    cfg.validate()?;
    let peaks = gravity_peaks(t, cfg.gravity_exponent)?;
    let sigmas = sigma_vectors(cfg)?;
    let evaluator = Evaluator::new(t);
    let total = sigmas.len();
    log::info!("sweep: {total} instances on {} nodes", t.node_count());
    let done = AtomicUsize::new(0);
    (0..total)
        .into_par_iter()
        .map(|id| {
            let sigma = sigmas.get(id);
            let (eval, ms) = timed(options, || {
                let marginals = sample_marginals(&peaks, cfg, &sigma, id)?;
                evaluator.evaluate(&CappedHoseModel::new(marginals, peaks.clone())?)
            })?;
            let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
            if finished.is_multiple_of(500) {
                log::info!("sweep: {finished}/{total}");
            }
            Ok(eval.into_record(id, sigma_label(&sigma), ms))
        })
        .collect()
}

/// One instance per horizon, built from the series prefix of that length.
pub fn run_timeseries(t: &Topology, ds: &DemandSeries, horizons: &[usize]) -> Result<Vec<InstanceRecord>> {
    run_timeseries_with(t, ds, horizons, RunOptions::default())
}

pub fn run_timeseries_with(
    t: &Topology,
    ds: &DemandSeries,
    horizons: &[usize],
    options: RunOptions,
) -> Result<Vec<InstanceRecord>> {
    if ds.node_count() != t.node_count() {
        return Err(Error::DimensionMismatch { expected: t.node_count(), actual: ds.node_count() });
    }
    if let Some(&h) = horizons.iter().find(|&&h| h == 0 || h > ds.len()) {
        return Err(Error::Horizon { horizon: h, length: ds.len() });
    }
    let evaluator = Evaluator::new(t);
    horizons
        .par_iter()
        .enumerate()
        .map(|(id, &h)| {
            let (eval, ms) = timed(options, || evaluator.evaluate(&ingest_time_series(ds, h)?))?;
            Ok(eval.into_record(id as u64, format!("timeseries:{h}"), ms))
        })
        .collect()
}

pub fn write_csv(records: &[InstanceRecord], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(reader: impl Read) -> Result<Vec<InstanceRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Everything needed to rerun and reproduce a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub mode: String,
    pub topology_path: String,
    pub topology_sha256: String,
    pub coordinate_system: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub horizons: Vec<usize>,
    pub record_timing: bool,
}

impl RunManifest {
    fn base(mode: &str, topology_path: &Path, t: &Topology, options: RunOptions) -> Result<Self> {
        Ok(RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            mode: mode.to_string(),
            topology_path: topology_path.display().to_string(),
            topology_sha256: file_sha256(topology_path)?,
            coordinate_system: t.coordinate_system().as_str().to_string(),
            sweep: None,
            series_path: None,
            series_sha256: None,
            horizons: Vec::new(),
            record_timing: options.record_timing,
        })
    }

    pub fn for_sweep(topology_path: &Path, t: &Topology, cfg: &SweepConfig, options: RunOptions) -> Result<Self> {
        Ok(RunManifest { sweep: Some(*cfg), ..Self::base("sweep", topology_path, t, options)? })
    }

    pub fn for_timeseries(
        topology_path: &Path,
        t: &Topology,
        series_path: &Path,
        horizons: &[usize],
        options: RunOptions,
    ) -> Result<Self> {
        Ok(RunManifest {
            series_path: Some(series_path.display().to_string()),
            series_sha256: Some(file_sha256(series_path)?),
            horizons: horizons.to_vec(),
            ..Self::base("timeseries", topology_path, t, options)?
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

pub fn file_sha256(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(std::fs::read(path)?)))
}

/// `<out>.manifest.json` next to a results file.
pub fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    name.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traffic::{DemandMatrix, Peaks};

    fn square() -> Topology {
        Topology::parse(
            r#"{"nodes":[{"id":"a","x":0,"y":0,"population":3},{"id":"b","x":1,"y":0,"population":1},
                         {"id":"c","x":1,"y":1,"population":2},{"id":"d","x":0,"y":1,"population":5}],
                "edges":[{"a":"a","b":"b"},{"a":"b","b":"c"},{"a":"c","b":"d"},{"a":"d","b":"a"}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn tiny_sweep() {
        let t = square();
        let records = run_sweep(&t, &SweepConfig::new(1, 1, 3)).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].sigma, "0");
        assert_eq!(records[1].sigma, "1");
        for r in &records {
            assert!(r.hh_link_cost <= r.hub_link_cost * (1.0 + 1e-9));
            assert!(r.distinct_hubs >= 1);
            assert_eq!(r.elapsed_ms, 0);
        }
        // σ = 1 puts every marginal at its row sum: no marginal strength left
        assert_eq!(records[1].mu_norm, 0.0);
    }

    #[test]
    fn csv_round_trip_and_header() {
        let records = run_sweep(&square(), &SweepConfig::new(2, 2, 1)).unwrap();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 10);
        assert_eq!(read_csv(buf.as_slice()).unwrap(), records);

        let mut empty = Vec::new();
        write_csv(&[], &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim_end(), CSV_HEADER);
    }

    #[test]
    fn timeseries_records() {
        let t = square();
        let mut small = DemandMatrix::zeros(4);
        small.set_symmetric(0, 1, 1.0);
        let mut big = DemandMatrix::zeros(4);
        big.set_symmetric(0, 1, 2.0);
        big.set_symmetric(2, 3, 1.0);
        let ds = DemandSeries::new(4, vec![big.clone(), small, big]).unwrap();
        let records = run_timeseries(&t, &ds, &[1, 2, 3]).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[2].sigma, "timeseries:3");
        // later snapshots add nothing beyond the first
        let strip = |r: &InstanceRecord| InstanceRecord { instance_id: 0, sigma: String::new(), ..r.clone() };
        assert_eq!(strip(&records[0]), strip(&records[1]));
        assert_eq!(strip(&records[0]), strip(&records[2]));
        assert!(matches!(run_timeseries(&t, &ds, &[4]), Err(Error::Horizon { .. })));
    }

    #[test]
    fn ratio_rules() {
        let e = |sp, hh| Evaluation {
            mu_norm: 0.0,
            pi_norm: 0.0,
            sp_link_cost: sp,
            hh_link_cost: hh,
            hub_link_cost: hh,
            sp_node_cost: 0.0,
            hh_node_cost: 0.0,
            distinct_hubs: 1,
        };
        assert_eq!(e(3.0, 2.0).cost_ratio(), 1.5);
        assert_eq!(e(0.0, 0.0).cost_ratio(), 1.0);
        assert_eq!(e(1.0, 0.0).cost_ratio(), f64::INFINITY);
    }

    #[test]
    fn evaluator_on_fixed_model() {
        let t = square();
        let peaks = Peaks::from_fn(4, |_, _| 1.0).unwrap();
        let m = CappedHoseModel::new(vec![3.0; 4], peaks).unwrap();
        let e = Evaluator::new(&t).evaluate(&m).unwrap();
        // fixed demand on a unit square: four adjacent pairs on one edge,
        // two diagonals on two edges each
        assert_eq!(e.sp_link_cost, 8.0);
        assert!(e.hh_link_cost <= e.hub_link_cost);
    }

    #[test]
    fn manifest_paths() {
        assert_eq!(manifest_path(Path::new("out/results.csv")), Path::new("out/results.csv.manifest.json"));
    }
}
