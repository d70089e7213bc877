#![allow(dead_code)]

use capped_rnd::hub_routing::{HubTree, HubTreeBuilder};
use capped_rnd::topology::Topology;
use capped_rnd::traffic::{CappedHoseModel, DemandMatrix, Peaks};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Maximizes `c·x` subject to `A x <= b`, `x >= 0`, with `b >= 0`, by the
/// dense tableau simplex method under Bland's rule.
pub fn simplex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> f64 {
    let (m, n) = (a.len(), c.len());
    let width = n + m + 1;
    let mut tab = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        assert!(b[i] >= 0.0);
        tab[i][..n].copy_from_slice(&a[i]);
        tab[i][n + i] = 1.0;
        tab[i][width - 1] = b[i];
    }
    for j in 0..n {
        tab[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let eps = 1e-12;
    while let Some(col) = (0..n + m).find(|&j| tab[m][j] < -eps) {
        let mut row = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if tab[i][col] > eps {
                let ratio = tab[i][width - 1] / tab[i][col];
                if ratio < best - eps || (ratio <= best + eps && row.is_some_and(|r: usize| basis[i] < basis[r])) {
                    best = ratio;
                    row = Some(i);
                }
            }
        }
        let row = row.expect("bounded program");
        let pivot = tab[row][col];
        for v in tab[row].iter_mut() {
            *v /= pivot;
        }
        for i in 0..=m {
            if i != row && tab[i][col] != 0.0 {
                let factor = tab[i][col];
                let pivot = tab[row].clone();
                for (x, p) in tab[i].iter_mut().zip(&pivot) {
                    *x -= factor * p;
                }
            }
        }
        basis[row] = col;
    }
    tab[m][width - 1]
}

/// `max Σ w·D_ij` over the capped hose universe, as a plain LP.
pub fn lp_weighted(m: &CappedHoseModel, pairs: &[(usize, usize, f64)]) -> f64 {
    let n = m.node_count();
    let k = pairs.len();
    if k == 0 {
        return 0.0;
    }
    let c: Vec<f64> = pairs.iter().map(|p| p.2).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (x, &(i, j, _)) in pairs.iter().enumerate() {
        let mut row = vec![0.0; k];
        row[x] = 1.0;
        a.push(row);
        b.push(m.peak(i, j));
    }
    for v in 0..n {
        let row: Vec<f64> = pairs.iter().map(|&(i, j, _)| if i == v || j == v { 1.0 } else { 0.0 }).collect();
        if row.iter().any(|&x| x > 0.0) {
            a.push(row);
            b.push(m.marginal(v));
        }
    }
    simplex_max(&c, &a, &b)
}

pub fn lp_pairs(m: &CappedHoseModel, pairs: &[(usize, usize)]) -> f64 {
    let w: Vec<_> = pairs.iter().map(|&(i, j)| (i, j, 1.0)).collect();
    lp_weighted(m, &w)
}

pub fn lp_u_star(m: &CappedHoseModel, a: &[usize], b: &[usize]) -> f64 {
    let pairs: Vec<_> = a.iter().flat_map(|&i| b.iter().map(move |&j| (i.min(j), i.max(j)))).collect();
    lp_pairs(m, &pairs)
}

/// Random model; peaks are sometimes zero or coarse so that ties and
/// degenerate cases show up.
pub fn random_model(rng: &mut impl Rng, n: usize) -> CappedHoseModel {
    let coarse = rng.random_bool(0.3);
    let peaks = Peaks::from_fn(n, |_, _| {
        if rng.random_bool(0.2) {
            0.0
        } else if coarse {
            rng.random_range(1..=4) as f64
        } else {
            rng.random_range(0.0..5.0)
        }
    })
    .unwrap();
    let marginals = (0..n)
        .map(|i| match rng.random_range(0..4) {
            0 => peaks.row_sum(i) * rng.random_range(1.0..1.5),
            1 => peaks.row_max(i),
            2 => rng.random_range(0.0..=peaks.row_sum(i).max(1.0)),
            _ => if coarse { rng.random_range(0..=6) as f64 } else { rng.random_range(0.0..8.0) },
        })
        .collect();
    CappedHoseModel::new(marginals, peaks).unwrap()
}

/// Random connected topology over ids `n00, n01, ...`: a random spanning
/// tree plus extra edges. Costs are small integers when `integral`, which
/// produces many equal-cost paths.
pub fn random_topology(rng: &mut impl Rng, n: usize, extra: usize, integral: bool) -> Topology {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = std::collections::BTreeSet::new();
    for k in 1..n {
        let parent = order[rng.random_range(0..k)];
        let child = order[k];
        edges.insert((parent.min(child), parent.max(child)));
    }
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let id = |v: usize| format!("n{v:02}");
    let json = serde_json::json!({
        "nodes": (0..n).map(|v| serde_json::json!({"id": id(v)})).collect::<Vec<_>>(),
        "edges": edges.iter().map(|&(a, b)| {
            let cost = if integral { rng.random_range(1..=3) as f64 } else { rng.random_range(0.1..2.0) };
            serde_json::json!({"a": id(a), "b": id(b), "cost": cost})
        }).collect::<Vec<_>>(),
    });
    Topology::parse(&json.to_string()).unwrap()
}

/// Random hub tree over `n` leaves with exactly `internal` internal nodes.
pub fn random_hub_tree(rng: &mut impl Rng, n: usize, internal: usize) -> HubTree {
    assert!((1..n).contains(&internal));
    // group sizes g_k >= 2 with Σ (g_k - 1) = n - 1
    let mut extra = vec![1usize; internal];
    for _ in 0..n - 1 - internal {
        let k = rng.random_range(0..internal);
        extra[k] += 1;
    }
    let mut roots: Vec<usize> = (0..n).collect();
    let mut b = HubTreeBuilder::new(n);
    for e in extra {
        roots.shuffle(rng);
        let group: Vec<usize> = roots.drain(..e + 1).collect();
        roots.push(b.add_internal(&group).unwrap());
    }
    b.build().unwrap()
}

/// A random member of the universe: scaled random entries under the peaks,
/// shrunk pairwise until every marginal holds.
pub fn random_member(rng: &mut impl Rng, m: &CappedHoseModel) -> DemandMatrix {
    let n = m.node_count();
    let mut d = DemandMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let x = if rng.random_bool(0.3) { m.peak(i, j) } else { rng.random_range(0.0..=1.0) * m.peak(i, j) };
            d.set_symmetric(i, j, x);
        }
    }
    let factor: Vec<f64> = (0..n)
        .map(|i| {
            let s = d.row_sum(i);
            if s > m.marginal(i) { m.marginal(i) / s } else { 1.0 }
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            d.set_symmetric(i, j, d.get(i, j) * factor[i].min(factor[j]));
        }
    }
    d
}
