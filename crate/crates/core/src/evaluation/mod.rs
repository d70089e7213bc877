//! Routing templates, worst-case link capacities and their prices.

mod theorem2;

pub use theorem2::{theorem2_fixture, Theorem2Fixture};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::demand_oracle::{weighted_pair_set_worst_case, WorstCase};
use crate::hub_routing::{HubMap, HubTree, RoutingTemplate};
use crate::topology::{ShortestPathIndex, Topology};
use crate::traffic::CappedHoseModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemplateKind {
    #[serde(rename = "SP")]
    ShortestPath,
    #[serde(rename = "HUB")]
    SingleHub,
    #[serde(rename = "TR")]
    Tree,
    #[serde(rename = "HH")]
    HierarchicalHub,
}

/// Installed capacity per topology edge, indexed like [`Topology::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityVector {
    values: Vec<f64>,
}

impl CapacityVector {
    pub fn zeros(edges: usize) -> Self {
        CapacityVector { values: vec![0.0; edges] }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidTemplate(format!("invalid capacity {v}")));
        }
        Ok(CapacityVector { values })
    }

    pub fn get(&self, e: usize) -> f64 {
        self.values[e]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn add(&mut self, e: usize, amount: f64) {
        self.values[e] += amount;
    }
}

/// How a node is priced from the capacities of its incident links.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NodeCostRule {
    /// Sum of incident capacities.
    #[default]
    Sum,
    /// Largest single incident capacity.
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub template: TemplateKind,
    pub link_cost: f64,
    pub node_costs: Vec<f64>,
    pub total_node_cost: f64,
    pub per_edge: CapacityVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReportJson {
    pub template: TemplateKind,
    pub link_cost: f64,
    pub total_node_cost: f64,
    pub edges: Vec<EdgeCapacityJson>,
    pub nodes: Vec<NodeCostJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCapacityJson {
    pub a: String,
    pub b: String,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCostJson {
    pub id: String,
    pub cost: f64,
}

impl CostReport {
    pub fn new(template: TemplateKind, per_edge: CapacityVector, t: &Topology) -> Self {
        Self::with_rule(template, per_edge, t, NodeCostRule::Sum)
    }

    pub fn with_rule(template: TemplateKind, per_edge: CapacityVector, t: &Topology, rule: NodeCostRule) -> Self {
        let node_costs = node_costs_with(&per_edge, t, rule);
        CostReport {
            template,
            link_cost: link_cost(&per_edge, t),
            total_node_cost: node_costs.iter().sum(),
            node_costs,
            per_edge,
        }
    }

    pub fn to_json(&self, t: &Topology) -> CostReportJson {
        CostReportJson {
            template: self.template,
            link_cost: self.link_cost,
            total_node_cost: self.total_node_cost,
            edges: t
                .edges()
                .iter()
                .zip(self.per_edge.values())
                .map(|(e, &capacity)| EdgeCapacityJson { a: t.id(e.a).into(), b: t.id(e.b).into(), capacity })
                .collect(),
            nodes: self
                .node_costs
                .iter()
                .enumerate()
                .map(|(v, &cost)| NodeCostJson { id: t.id(v).into(), cost })
                .collect(),
        }
    }
}

/// Every pair routed on its canonical shortest path.
pub fn sp_template(idx: &ShortestPathIndex) -> RoutingTemplate {
    RoutingTemplate::from_fn(idx.node_count(), |i, j| idx.path(i, j)).expect("canonical paths join their endpoints")
}

/// For each edge, the pairs whose walk crosses it with their crossing counts.
pub fn crossing_pairs(tpl: &RoutingTemplate, t: &Topology) -> Result<Vec<Vec<(usize, usize, f64)>>> {
    if tpl.node_count() != t.node_count() {
        return Err(Error::DimensionMismatch { expected: t.node_count(), actual: tpl.node_count() });
    }
    let mut crossings = vec![Vec::new(); t.edge_count()];
    let mut used = Vec::new();
    for ((i, j), walk) in tpl.walks() {
        used.clear();
        for w in walk.windows(2) {
            let e = t.edge_between(w[0], w[1]).ok_or_else(|| {
                Error::InvalidTemplate(format!("walk for ({i}, {j}) uses non-edge {} - {}", t.id(w[0]), t.id(w[1])))
            })?;
            used.push(e);
        }
        used.sort_unstable();
        for run in used.chunk_by(|a, b| a == b) {
            crossings[run[0]].push((i, j, run.len() as f64));
        }
    }
    Ok(crossings)
}

/// Per-edge worst cases: the capacity each edge needs and a member matrix
/// that loads it fully.
pub fn template_worst_cases(m: &CappedHoseModel, tpl: &RoutingTemplate, t: &Topology) -> Result<Vec<WorstCase>> {
    if m.node_count() != t.node_count() {
        return Err(Error::DimensionMismatch { expected: t.node_count(), actual: m.node_count() });
    }
    crossing_pairs(tpl, t)?.iter().map(|pairs| weighted_pair_set_worst_case(m, pairs)).collect()
}

/// `cap_e`: the largest demand any member matrix routes across each edge.
pub fn template_capacities(m: &CappedHoseModel, tpl: &RoutingTemplate, t: &Topology) -> Result<CapacityVector> {
    let values = template_worst_cases(m, tpl, t)?.into_iter().map(|w| w.value).collect();
    Ok(CapacityVector { values })
}

pub fn link_cost(cv: &CapacityVector, t: &Topology) -> f64 {
    t.edges().iter().zip(cv.values()).map(|(e, c)| e.cost * c).sum()
}

pub fn node_costs(cv: &CapacityVector, t: &Topology) -> Vec<f64> {
    node_costs_with(cv, t, NodeCostRule::Sum)
}

pub fn node_costs_with(cv: &CapacityVector, t: &Topology, rule: NodeCostRule) -> Vec<f64> {
    (0..t.node_count())
        .map(|v| {
            let incident = t.neighbors(v).iter().map(|&(_, e)| cv.get(e));
            match rule {
                NodeCostRule::Sum => incident.sum(),
                NodeCostRule::Max => incident.fold(0.0, f64::max),
            }
        })
        .collect()
}

/// `argmin_h Σ_i trunc(U(i)) · dist(i, h)`, smallest `h` on ties.
pub fn best_single_hub(m: &CappedHoseModel, idx: &ShortestPathIndex) -> (usize, f64) {
    let n = m.node_count();
    let mut best = (0, f64::INFINITY);
    for h in 0..n {
        let cost: f64 = (0..n).map(|i| m.truncated_marginal(i) * idx.dist(i, h)).sum();
        if cost < best.1 {
            best = (h, cost);
        }
    }
    best
}

/// Capacities of single-hub routing through `hub`: each node reserves
/// `trunc(U(i))` on its shortest path to the hub.
pub fn single_hub_capacities(m: &CappedHoseModel, idx: &ShortestPathIndex, t: &Topology, hub: usize) -> CapacityVector {
    let mut cv = CapacityVector::zeros(t.edge_count());
    for i in 0..m.node_count() {
        for &e in idx.path_edges(i, hub) {
            cv.add(e, m.truncated_marginal(i));
        }
    }
    cv
}

/// Capacities of a hierarchical-hub design: every tree edge reserves its
/// capacity on the shortest path between its endpoints' images. Reservations
/// of different tree edges add up on shared links.
pub fn hh_capacities(tree: &HubTree, eta: &HubMap, idx: &ShortestPathIndex, t: &Topology) -> Result<CapacityVector> {
    let mut cv = CapacityVector::zeros(t.edge_count());
    for (c, p) in tree.edges() {
        let u = tree.capacity(c)?;
        for &e in idx.path_edges(eta.image(c), eta.image(p)) {
            cv.add(e, u);
        }
    }
    Ok(cv)
}

/// Routes every pair along the unique path of a spanning tree of `t`.
pub fn tree_template_in_graph(t: &Topology, tree_edges: &[usize]) -> Result<RoutingTemplate> {
    let n = t.node_count();
    let mut edges = tree_edges.to_vec();
    edges.sort_unstable();
    edges.dedup();
    if let Some(&e) = edges.iter().find(|&&e| e >= t.edge_count()) {
        return Err(Error::NotSpanningTree(format!("unknown edge {e}")));
    }
    if edges.len() != tree_edges.len() || edges.len() + 1 != n {
        return Err(Error::NotSpanningTree(format!("{} edges over {n} nodes", tree_edges.len())));
    }
    let mut adj = vec![Vec::new(); n];
    for &e in &edges {
        let edge = t.edge(e);
        adj[edge.a].push(edge.b);
        adj[edge.b].push(edge.a);
    }
    let mut parents = Vec::with_capacity(n);
    for root in 0..n {
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = parent.iter().position(|&p| p == usize::MAX) {
            return Err(Error::NotSpanningTree(format!("{} is not reached", t.id(v))));
        }
        parents.push(parent);
    }
    RoutingTemplate::from_fn(n, |i, j| {
        // walk from j back to i in the tree rooted at i, then reverse
        let parent = &parents[i];
        let mut walk = vec![j];
        let mut v = j;
        while v != i {
            v = parent[v];
            walk.push(v);
        }
        walk.reverse();
        walk
    })
}
