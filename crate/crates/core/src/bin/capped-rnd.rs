use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use capped_rnd::evaluation::{
    best_single_hub, link_cost, sp_template, template_capacities, theorem2_fixture, tree_template_in_graph,
};
use capped_rnd::harness::{
    manifest_path, read_csv, run_sweep_with, run_timeseries_with, summarize, write_csv, InstanceRecord, RunManifest,
    RunOptions,
};
use capped_rnd::hub_routing::place_hubs;
use capped_rnd::topology::{ShortestPathIndex, Topology};
use capped_rnd::traffic::{DemandSeries, SweepConfig};
use capped_rnd::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Robust network design under capped hose traffic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep synthetic gravity-model instances over a σ grid.
    Sweep {
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: u64,
        /// Number of σ vectors to draw when the full grid exceeds it.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i32).range(1..=2))]
        gravity_exponent: i32,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate measured demand over one or more series prefixes.
    Timeseries {
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        series: PathBuf,
        /// Comma-separated prefix lengths, in snapshots.
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print an analytic fixture and its costs as JSON.
    Fixture {
        #[command(subcommand)]
        kind: Fixture,
    },
    /// Tabulate a results CSV.
    Summarize { results: PathBuf },
}

#[derive(Subcommand)]
enum Fixture {
    /// Two stars joined by a bridge.
    Theorem2 {
        #[arg(long)]
        n: usize,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Record per-instance wall-clock time in `elapsed_ms`.
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions { record_timing: self.timing }
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.threads {
            pool = pool.num_threads(n);
        }
        let pool = pool.build().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(pool.install(f))
    }
}

fn write_results(records: &[InstanceRecord], out: &Path, manifest: &RunManifest) -> Result<()> {
    write_csv(records, BufWriter::new(File::create(out)?))?;
    manifest.write(&manifest_path(out))?;
    log::info!("wrote {} records to {}", records.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { topology, s, k, seed, samples, gravity_exponent, out, run } => {
            let t = Topology::load(&topology)?;
            let cfg = SweepConfig { s, k, seed, sample_count: samples, gravity_exponent };
            let records = run.install(|| run_sweep_with(&t, &cfg, run.options()))??;
            write_results(&records, &out, &RunManifest::for_sweep(&topology, &t, &cfg, run.options())?)
        }
        Command::Timeseries { topology, series, horizons, out, run } => {
            let t = Topology::load(&topology)?;
            let ds = DemandSeries::read_csv(BufReader::new(File::open(&series)?), &t)?;
            let records = run.install(|| run_timeseries_with(&t, &ds, &horizons, run.options()))??;
            let manifest = RunManifest::for_timeseries(&topology, &t, &series, &horizons, run.options())?;
            write_results(&records, &out, &manifest)
        }
        Command::Fixture { kind: Fixture::Theorem2 { n } } => {
            let f = theorem2_fixture(n)?;
            let t = &f.topology;
            let idx = ShortestPathIndex::new(t);
            let sp = template_capacities(&f.model, &sp_template(&idx), t)?;
            let tree = template_capacities(&f.model, &tree_template_in_graph(t, &f.tree_edges)?, t)?;
            let placement = place_hubs(&f.hub_tree, &idx)?;
            let (hub, hub_cost) = best_single_hub(&f.model, &idx);
            let hubs: Vec<&str> = f.hub_tree.internal_nodes().map(|v| t.id(placement.map.image(v))).collect();
            let report = json!({
                "n": n,
                "topology": t.to_file(),
                "sp_link_cost": link_cost(&sp, t),
                "tree_link_cost": link_cost(&tree, t),
                "hh_link_cost": placement.cost,
                "hh_hubs": hubs,
                "hub_link_cost": hub_cost,
                "hub": t.id(hub),
                "hub_tree": f.hub_tree.to_json(t),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Summarize { results } => {
            let records = read_csv(BufReader::new(File::open(&results)?))?;
            println!("{}", summarize(&records)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
