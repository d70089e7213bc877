//! Worst-case aggregate demand over a capped hose universe.
//!
//! Every question here is a fractional capacitated b-matching: maximize the
//! (possibly weighted) demand summed over a set of pairs subject to the peak
//! and marginal bounds. When the pairs form a bipartite graph this is a single
//! max-flow. Otherwise it is solved on the bipartite double cover (each node
//! split into a sending and a receiving copy, each pair contributing one arc
//! per orientation), whose optimum is exactly twice the fractional optimum.

use std::collections::VecDeque;

use crate::flow::{ArcId, FlowNetwork};
use crate::hub_routing::HubTree;
use crate::traffic::{CappedHoseModel, DemandMatrix};
use crate::{Error, Result};

/// A set of unordered node pairs, stored as sorted `(i, j)` with `i < j`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (i, j) in pairs {
            if i == j {
                return Err(Error::InvalidModel(format!("pair ({i}, {i}) is not allowed")));
            }
            out.push((i.min(j), i.max(j)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(PairSet { pairs: out })
    }

    /// All pairs between two disjoint node sets.
    pub fn between(a: &[usize], b: &[usize]) -> Result<Self> {
        Self::new(a.iter().flat_map(|&i| b.iter().map(move |&j| (i, j))))
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Two-coloring of the graph `(V, S)` over `n` nodes, if it is bipartite.
    /// `Some(side)` with `side[i] == false` for the first color.
    pub fn bipartition(&self, n: usize) -> Option<Vec<bool>> {
        bipartition(n, self.pairs.iter().copied())
    }

    fn max_node(&self) -> Option<usize> {
        self.pairs.iter().map(|&(_, j)| j).max()
    }
}

fn bipartition(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Option<Vec<bool>> {
    let mut adj = vec![Vec::new(); n];
    for (i, j) in pairs {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let c = color[u].unwrap();
            for &w in &adj[u] {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

/// An optimal value together with a member matrix attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase {
    pub value: f64,
    pub matrix: DemandMatrix,
}

/// `max Σ_{(i,j,w)} w · D_ij` over the universe, for positive weights `w`.
fn solve(m: &CappedHoseModel, pairs: &[(usize, usize, f64)]) -> WorstCase {
    let n = m.node_count();
    let weighted = pairs.iter().any(|&(_, _, w)| w != 1.0);
    let (s, t) = (0, 1);
    let mut matrix = DemandMatrix::zeros(n);
    if pairs.is_empty() {
        return WorstCase { value: 0.0, matrix };
    }
    let mut arcs: Vec<(usize, usize, ArcId)> = Vec::with_capacity(2 * pairs.len());
    let mut net;
    let halve;
    if let Some(side) = bipartition(n, pairs.iter().map(|&(i, j, _)| (i, j))) {
        net = FlowNetwork::new(n + 2);
        let mut used = vec![false; n];
        for &(i, j, w) in pairs {
            let (x, y) = if side[i] { (j, i) } else { (i, j) };
            let a = net.add_arc_with_cost(2 + x, 2 + y, m.peak(x, y), -w);
            arcs.push((x, y, a));
            used[x] = true;
            used[y] = true;
        }
        for v in (0..n).filter(|&v| used[v]) {
            if side[v] {
                net.add_arc(2 + v, t, m.marginal(v));
            } else {
                net.add_arc(s, 2 + v, m.marginal(v));
            }
        }
        halve = false;
    } else {
        // node v: sender copy 2 + v, receiver copy 2 + n + v
        net = FlowNetwork::new(2 * n + 2);
        let mut used = vec![false; n];
        for &(i, j, w) in pairs {
            let a = net.add_arc_with_cost(2 + i, 2 + n + j, m.peak(i, j), -w);
            let b = net.add_arc_with_cost(2 + j, 2 + n + i, m.peak(i, j), -w);
            arcs.push((i, j, a));
            arcs.push((i, j, b));
            used[i] = true;
            used[j] = true;
        }
        for v in (0..n).filter(|&v| used[v]) {
            net.add_arc(s, 2 + v, m.marginal(v));
            net.add_arc(2 + n + v, t, m.marginal(v));
        }
        halve = true;
    }
    let raw = if weighted { net.max_weight_flow(s, t) } else { net.max_flow(s, t) };
    let scale = if halve { 0.5 } else { 1.0 };
    for &(i, j, a) in &arcs {
        let d = matrix.get(i, j) + scale * net.flow(a);
        matrix.set_symmetric(i, j, d);
    }
    WorstCase { value: scale * raw, matrix }
}

fn check_nodes(m: &CappedHoseModel, nodes: impl IntoIterator<Item = usize>) -> Result<()> {
    let n = m.node_count();
    match nodes.into_iter().find(|&v| v >= n) {
        Some(v) => Err(Error::DimensionMismatch { expected: n, actual: v + 1 }),
        None => Ok(()),
    }
}

/// Largest total demand over the pairs of `s` attainable by one member matrix.
pub fn pair_set_worst_case(m: &CappedHoseModel, s: &PairSet) -> Result<WorstCase> {
    check_nodes(m, s.max_node())?;
    let weighted: Vec<_> = s.pairs.iter().map(|&(i, j)| (i, j, 1.0)).collect();
    Ok(solve(m, &weighted))
}

/// `max_{D} Σ_{(i,j) ∈ S} D_ij` over the capped hose universe.
pub fn pair_set_capacity(m: &CappedHoseModel, s: &PairSet) -> Result<f64> {
    pair_set_worst_case(m, s).map(|w| w.value)
}

/// `max_{D} Σ w_ij D_ij` for pairs counted with positive multiplicities.
/// Repeated pairs are merged by summing their weights.
pub fn weighted_pair_set_worst_case(m: &CappedHoseModel, pairs: &[(usize, usize, f64)]) -> Result<WorstCase> {
    check_nodes(m, pairs.iter().flat_map(|&(i, j, _)| [i, j]))?;
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(pairs.len());
    let mut sorted: Vec<_> = pairs
        .iter()
        .map(|&(i, j, w)| {
            if i == j || !(w > 0.0 && w.is_finite()) {
                Err(Error::InvalidModel(format!("invalid weighted pair ({i}, {j}, {w})")))
            } else {
                Ok((i.min(j), i.max(j), w))
            }
        })
        .collect::<Result<_>>()?;
    sorted.sort_by_key(|p| (p.0, p.1));
    for (i, j, w) in sorted {
        match merged.last_mut() {
            Some(last) if (last.0, last.1) == (i, j) => last.2 += w,
            _ => merged.push((i, j, w)),
        }
    }
    Ok(solve(m, &merged))
}

fn disjoint_sides(m: &CappedHoseModel, a: &[usize], b: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    check_nodes(m, a.iter().chain(b).copied())?;
    let mut side = vec![0u8; m.node_count()];
    for &v in a {
        side[v] = 1;
    }
    if let Some(&v) = b.iter().find(|&&v| side[v] == 1) {
        return Err(Error::OverlappingSets(v));
    }
    let mut a: Vec<usize> = a.to_vec();
    let mut b: Vec<usize> = b.to_vec();
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    Ok((a, b))
}

/// `u*(A, B)`: the largest demand that can flow between disjoint node sets.
pub fn u_star(m: &CappedHoseModel, a: &[usize], b: &[usize]) -> Result<f64> {
    u_star_worst_case(m, a, b).map(|w| w.value)
}

pub fn u_star_worst_case(m: &CappedHoseModel, a: &[usize], b: &[usize]) -> Result<WorstCase> {
    let (a, b) = disjoint_sides(m, a, b)?;
    let n = m.node_count();
    let mut matrix = DemandMatrix::zeros(n);
    if a.is_empty() || b.is_empty() {
        return Ok(WorstCase { value: 0.0, matrix });
    }
    let (s, t) = (0, 1);
    let mut net = FlowNetwork::new(n + 2);
    let mut arcs = Vec::with_capacity(a.len() * b.len());
    for &i in &a {
        net.add_arc(s, 2 + i, m.marginal(i));
        for &j in &b {
            arcs.push((i, j, net.add_arc(2 + i, 2 + j, m.peak(i, j))));
        }
    }
    for &j in &b {
        net.add_arc(2 + j, t, m.marginal(j));
    }
    let value = net.max_flow(s, t);
    for (i, j, arc) in arcs {
        matrix.set_symmetric(i, j, net.flow(arc));
    }
    Ok(WorstCase { value, matrix })
}

/// `u*(A ∪ B, V ∖ (A ∪ B)) / u*(A, B)`, or `f64::INFINITY` when no demand can
/// pass between `A` and `B`.
pub fn sparsity(m: &CappedHoseModel, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidModel("sparsity needs nonempty sets".into()));
    }
    let between = u_star(m, a, b)?;
    if between <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut inside = vec![false; m.node_count()];
    let union: Vec<usize> = a.iter().chain(b).copied().collect();
    for &v in &union {
        inside[v] = true;
    }
    let outside: Vec<usize> = (0..m.node_count()).filter(|&v| !inside[v]).collect();
    Ok(u_star(m, &union, &outside)? / between)
}

/// Required capacity of hub-tree edge `edge`: the worst-case demand between
/// the leaves on either side of it.
pub fn fundamental_cut_capacity(m: &CappedHoseModel, tree: &HubTree, edge: usize) -> Result<f64> {
    if tree.leaf_count() != m.node_count() {
        return Err(Error::DimensionMismatch { expected: m.node_count(), actual: tree.leaf_count() });
    }
    let (below, above) = tree.fundamental_cut(edge)?;
    u_star(m, &below, &above)
}
