//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use capped_rnd::demand_oracle::{pair_set_capacity, u_star, PairSet};
use capped_rnd::evaluation::{
    best_single_hub, crossing_pairs, link_cost, sp_template, template_capacities, theorem2_fixture,
    tree_template_in_graph,
};
use capped_rnd::harness::{read_csv, InstanceRecord};
use capped_rnd::hub_routing::{hh_cost, place_hubs, place_hubs_rooted, HubMap, HubTree};
use capped_rnd::topology::ShortestPathIndex;
use capped_rnd::traffic::{marginal_strength, peak_strength, strength_vectors, CappedHoseModel, Peaks};
use capped_rnd::{pairs, Result};
use rand::Rng;

use common::{lp_pairs, lp_u_star, random_hub_tree, random_model, random_topology, rng};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        if failures.is_empty() {
            Outcome { pass: true, detail: summary }
        } else {
            let shown: Vec<&str> = failures.iter().take(6).map(String::as_str).collect();
            let more = failures.len().saturating_sub(shown.len());
            let tail = if more > 0 { format!("; ... {more} more") } else { String::new() };
            Outcome { pass: false, detail: format!("{summary}; {}{tail}", shown.join("; ")) }
        }
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn exhaustive(tree: &HubTree, idx: &ShortestPathIndex) -> Result<f64> {
    let n = idx.node_count();
    let internal: Vec<usize> = tree.internal_nodes().collect();
    let mut eta: Vec<usize> = (0..tree.node_count()).collect();
    let mut best = f64::INFINITY;
    for code in 0..n.pow(internal.len() as u32) {
        let mut rest = code;
        for &v in &internal {
            eta[v] = rest % n;
            rest /= n;
        }
        best = best.min(hh_cost(tree, &HubMap::new(tree, eta.clone(), n)?, idx)?);
    }
    Ok(best)
}

fn two_star() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut costs = Vec::new();
    for n in [2usize, 3, 5, 10] {
        let start = Instant::now();
        let f = theorem2_fixture(n)?;
        let t = &f.topology;
        let idx = ShortestPathIndex::new(t);
        let sp = link_cost(&template_capacities(&f.model, &sp_template(&idx), t)?, t);
        let tree = link_cost(&template_capacities(&f.model, &tree_template_in_graph(t, &f.tree_edges)?, t)?, t);
        let hh = place_hubs(&f.hub_tree, &idx)?.cost;
        let brute = if n <= 3 { Some(exhaustive(&f.hub_tree, &idx)?) } else { None };
        let elapsed = start.elapsed();

        let want_sp = (n * n - n) as f64;
        if !close(sp, want_sp, 1e-9) {
            failures.push(format!("n={n}: SP {sp} != {want_sp}"));
        }
        if !close(tree, 2.0, 1e-9) {
            failures.push(format!("n={n}: tree {tree} != 2"));
        }
        if hh > 2.0 + 1e-9 {
            failures.push(format!("n={n}: place_hubs {hh} > 2"));
        }
        if let Some(b) = brute {
            if !close(b, 2.0, 1e-9) {
                failures.push(format!("n={n}: exhaustive {b} != 2"));
            }
        }
        if elapsed >= Duration::from_secs(1) {
            failures.push(format!("n={n}: {elapsed:?} >= 1s"));
        }
        costs.push(format!("n={n} sp={sp:.6} tree={tree:.6} hh={hh:.6}"));
    }
    Ok(Outcome::new(&failures, costs.join(", ")))
}

fn random_sides(r: &mut impl Rng, n: usize) -> (Vec<usize>, Vec<usize>) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for v in 0..n {
        match r.random_range(0..3) {
            0 => a.push(v),
            1 => b.push(v),
            _ => {}
        }
    }
    (a, b)
}

fn oracle_equivalence() -> Result<Outcome> {
    let start = Instant::now();
    let mut r = rng(11);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let instances = 1000;
    for k in 0..instances {
        let n = r.random_range(2..=6);
        let m = random_model(&mut r, n);
        let chosen: Vec<(usize, usize)> = pairs(n).filter(|_| r.random_bool(0.5)).collect();
        let flow = pair_set_capacity(&m, &PairSet::new(chosen.iter().copied())?)?;
        let lp = lp_pairs(&m, &chosen);
        worst = worst.max((flow - lp).abs());
        if !close(flow, lp, 1e-7) {
            failures.push(format!("instance {k}: pair set {flow} vs lp {lp}"));
        }
        let (a, b) = random_sides(&mut r, n);
        let flow = u_star(&m, &a, &b)?;
        let lp = lp_u_star(&m, &a, &b);
        worst = worst.max((flow - lp).abs());
        if !close(flow, lp, 1e-7) {
            failures.push(format!("instance {k}: u* {flow} vs lp {lp}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        failures.push(format!("{elapsed:?} >= 30s"));
    }
    Ok(Outcome::new(&failures, format!("{instances} instances, max error {worst:.1e}, {elapsed:.2?}")))
}

fn limiting_cases() -> Result<Outcome> {
    let mut r = rng(12);
    let mut failures = Vec::new();
    let instances = 200;
    for k in 0..instances {
        let n = r.random_range(2..=9);
        let extra = r.random_range(0..2 * n);
        let integral = r.random_bool(0.5);
        let t = random_topology(&mut r, n, extra, integral);
        let idx = ShortestPathIndex::new(&t);

        // marginals above every row sum: deterministic peaks
        let peaks = Peaks::from_fn(n, |_, _| if r.random_bool(0.2) { 0.0 } else { r.random_range(0.0..5.0) })?;
        let marginals = (0..n).map(|i| peaks.row_sum(i) * r.random_range(1.0..2.0)).collect();
        let m = CappedHoseModel::new(marginals, peaks)?;
        if strength_vectors(&m).mu.iter().any(|&x| x != 0.0) {
            failures.push(format!("instance {k}: mu is not zero"));
        }
        let tpl = sp_template(&idx);
        let caps = template_capacities(&m, &tpl, &t)?;
        for (e, crossing) in crossing_pairs(&tpl, &t)?.iter().enumerate() {
            let sum: f64 = crossing.iter().map(|&(i, j, _)| m.peak(i, j)).sum();
            if !close(caps.get(e), sum, 1e-9) {
                failures.push(format!("instance {k}: edge {e} capacity {} vs {sum}", caps.get(e)));
            }
        }

        // peaks above the smaller marginal: pure hose
        let marginals: Vec<f64> = (0..n).map(|_| if r.random_bool(0.1) { 0.0 } else { r.random_range(0.0..5.0) }).collect();
        let peaks = Peaks::from_fn(n, |i, j| marginals[i].min(marginals[j]) * r.random_range(1.0..2.0))?;
        let m = CappedHoseModel::new(marginals.clone(), peaks.clone())?;
        if strength_vectors(&m).pi.iter().any(|&x| x != 0.0) {
            failures.push(format!("instance {k}: pi is not zero"));
        }
        let trunc: Vec<f64> = (0..n).map(|i| marginals[i].min(peaks.row_sum(i))).collect();
        let direct = (0..n)
            .map(|h| (0..n).map(|i| trunc[i] * idx.dist(i, h)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let (_, hub) = best_single_hub(&m, &idx);
        if !close(hub, direct, 1e-9) {
            failures.push(format!("instance {k}: best single hub {hub} vs {direct}"));
        }
    }
    Ok(Outcome::new(&failures, format!("{instances} instances per regime")))
}

fn dp_exactness() -> Result<Outcome> {
    let mut r = rng(13);
    let mut failures = Vec::new();
    let instances = 200;
    for k in 0..instances {
        let n = r.random_range(2..=8);
        let extra = r.random_range(0..n);
        let integral = r.random_bool(0.5);
        let t = random_topology(&mut r, n, extra, integral);
        let idx = ShortestPathIndex::new(&t);
        let internal = r.random_range(1..=(n - 1).min(4));
        let mut tree = random_hub_tree(&mut r, n, internal);
        tree.populate_capacities(&random_model(&mut r, n))?;
        let brute = exhaustive(&tree, &idx)?;
        let dp = place_hubs(&tree, &idx)?.cost;
        if !close(dp, brute, 1e-9) {
            failures.push(format!("instance {k}: dp {dp} vs exhaustive {brute}"));
        }
        for root in tree.internal_nodes() {
            let rooted = place_hubs_rooted(&tree, &idx, root)?.cost;
            if !close(rooted, brute, 1e-9) {
                failures.push(format!("instance {k}: root {root} gives {rooted} vs {brute}"));
            }
        }
    }
    Ok(Outcome::new(&failures, format!("{instances} instances")))
}

fn sp_bipartiteness() -> Result<Outcome> {
    let mut r = rng(14);
    let mut failures = Vec::new();
    let instances = 100;
    for k in 0..instances {
        let n = r.random_range(2..=15);
        let extra = r.random_range(0..2 * n);
        let integral = r.random_bool(0.5);
        let t = random_topology(&mut r, n, extra, integral);
        let idx = ShortestPathIndex::new(&t);
        for (e, crossing) in crossing_pairs(&sp_template(&idx), &t)?.iter().enumerate() {
            if PairSet::new(crossing.iter().map(|p| (p.0, p.1)))?.bipartition(n).is_none() {
                failures.push(format!("instance {k}: edge {e} crossing set is not bipartite"));
            }
        }
    }
    Ok(Outcome::new(&failures, format!("{instances} topologies")))
}

fn run_sweep_cli(out: &Path, threads: Option<usize>) -> std::io::Result<(bool, Duration, String)> {
    let topology = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/abilene.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_capped-rnd"));
    cmd.env("RUST_LOG", "warn").args(["sweep", "--s", "2", "--k", "8", "--seed", "1", "--topology"]);
    cmd.arg(topology).arg("--out").arg(out);
    if let Some(t) = threads {
        cmd.args(["--threads", &t.to_string()]);
    }
    let start = Instant::now();
    let output = cmd.output()?;
    Ok((output.status.success(), start.elapsed(), String::from_utf8_lossy(&output.stderr).into_owned()))
}

fn sweep_scale() -> Result<(Outcome, Vec<InstanceRecord>)> {
    let dir = std::env::temp_dir().join(format!("capped-rnd-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let (first, second) = (dir.join("first.csv"), dir.join("second.csv"));
    let mut failures = Vec::new();

    let (ok1, t1, err1) = run_sweep_cli(&first, None)?;
    let (ok2, t2, err2) = run_sweep_cli(&second, Some(1))?;
    for (ok, err) in [(ok1, err1), (ok2, err2)] {
        if !ok {
            failures.push(format!("sweep failed: {}", err.trim()));
        }
    }
    let mut records = Vec::new();
    if ok1 && ok2 {
        let (a, b) = (std::fs::read(&first)?, std::fs::read(&second)?);
        if a != b {
            failures.push("outputs differ between runs".into());
        }
        records = read_csv(a.as_slice())?;
        if records.len() != 6561 {
            failures.push(format!("{} records != 6561", records.len()));
        }
        if !records.iter().any(|r| r.cost_ratio > 1.0 && r.distinct_hubs >= 2) {
            failures.push("no record with cost_ratio > 1 and several hubs".into());
        }
    }
    for t in [t1, t2] {
        if t >= Duration::from_secs(600) {
            failures.push(format!("{t:?} >= 10min"));
        }
    }
    std::fs::remove_dir_all(&dir)?;
    let multi = records.iter().filter(|r| r.cost_ratio > 1.0 && r.distinct_hubs >= 2).count();
    let summary = format!(
        "{} records, {multi} with cost_ratio > 1 and several hubs, runs {t1:.1?} and {t2:.1?} (1 thread), identical bytes",
        records.len()
    );
    Ok((Outcome::new(&failures, summary), records))
}

fn single_hub_dominance(records: &[InstanceRecord]) -> Outcome {
    let failures: Vec<String> = records
        .iter()
        .filter(|r| r.hh_link_cost > r.hub_link_cost * (1.0 + 1e-9) + 1e-12)
        .map(|r| format!("instance {}: hh {} > hub {}", r.instance_id, r.hh_link_cost, r.hub_link_cost))
        .collect();
    let mut failures = failures;
    if records.is_empty() {
        failures.push("no sweep records".into());
    }
    Outcome::new(&failures, format!("{} sweep records", records.len()))
}

fn strength_properties() -> Result<Outcome> {
    let start = Instant::now();
    let mut r = rng(15);
    let mut failures = Vec::new();
    let instances = 10_000;
    for k in 0..instances {
        let n = r.random_range(2..=8);
        let m = random_model(&mut r, n);
        let s = strength_vectors(&m);
        if !s.mu.iter().chain(&s.pi).all(|x| (0.0..=1.0).contains(x)) {
            failures.push(format!("model {k}: strength outside [0, 1]"));
        }

        let i = r.random_range(0..n);
        let j = (i + 1 + r.random_range(0..n - 1)) % n;
        let with = |marginal: f64, peak: f64| -> Result<CappedHoseModel> {
            let mut marginals = m.marginals().to_vec();
            marginals[i] = marginal;
            let mut peaks = m.peaks().clone();
            peaks.set(i, j, peak);
            CappedHoseModel::new(marginals, peaks)
        };
        let (u, p) = (m.marginal(i), m.peak(i, j));
        let (lo, hi) = (m.peaks().row_max(i), m.peaks().row_sum(i));
        if hi > lo && marginal_strength(&with(lo, p)?, i) != 1.0 {
            failures.push(format!("model {k}: marginal at the row max is not 1"));
        }
        if marginal_strength(&with(hi, p)?, i) != 0.0 {
            failures.push(format!("model {k}: marginal at the row sum is not 0"));
        }
        let bound = u.min(m.marginal(j));
        if peak_strength(&with(u, bound)?, i, j) != 0.0 {
            failures.push(format!("model {k}: saturated peak is not 0"));
        }
        if bound > 0.0 && peak_strength(&with(u, 0.0)?, i, j) != 1.0 {
            failures.push(format!("model {k}: absent peak is not 1"));
        }
        if marginal_strength(&with(u + r.random_range(0.0..2.0), p)?, i) > marginal_strength(&m, i) + 1e-12 {
            failures.push(format!("model {k}: raising a marginal raised its strength"));
        }
        if peak_strength(&with(u, p + r.random_range(0.0..2.0))?, i, j) > peak_strength(&m, i, j) + 1e-12 {
            failures.push(format!("model {k}: raising a peak raised its strength"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) {
        failures.push(format!("{elapsed:?} >= 10s"));
    }
    Ok(Outcome::new(&failures, format!("{instances} models, {elapsed:.2?}")))
}

fn report(name: &str, outcome: Result<Outcome>) -> bool {
    let outcome = outcome.unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
    println!("{} {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    outcome.pass
}

fn main() -> ExitCode {
    let mut all = true;
    all &= report("two-star separation", two_star());
    all &= report("oracle equivalence", oracle_equivalence());
    all &= report("limiting-case degeneration", limiting_cases());
    all &= report("dp exactness", dp_exactness());
    let (sweep, records) = match sweep_scale() {
        Ok((outcome, records)) => (Ok(outcome), records),
        Err(e) => (Err(e), Vec::new()),
    };
    all &= report("single-hub dominance", Ok(single_hub_dominance(&records)));
    all &= report("sp bipartiteness", sp_bipartiteness());
    all &= report("sweep scale", sweep);
    all &= report("strength properties", strength_properties());
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
