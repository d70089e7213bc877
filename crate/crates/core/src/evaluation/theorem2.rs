use crate::hub_routing::{HubTree, HubTreeBuilder};
use crate::topology::{EdgeRecord, NodeRecord, Topology, TopologyFile};
use crate::traffic::{CappedHoseModel, Peaks};
use crate::{Error, Result};

/// Two stars joined by a bridge, where shortest-path routing pays `Θ(n²)`
/// while tree routing stays cheap.
///
/// Hubs `a` and `b` are joined by an edge of cost 1. Star edges `a - v_i`
/// and `b - w_j` cost `1/(2n)`, and every cross edge `v_i - w_j` costs
/// `1 - 1/n`. Each `v_i, w_j` pair has peak 1, leaves have marginal 1 and
/// the hubs carry no demand.
#[derive(Debug, Clone)]
pub struct Theorem2Fixture {
    pub n: usize,
    pub topology: Topology,
    pub model: CappedHoseModel,
    /// The bridge and all star edges.
    pub tree_edges: Vec<usize>,
    /// Two hubs: one over `a` and the `v_i`, the root over it, `b` and the `w_j`.
    /// Capacities are populated.
    pub hub_tree: HubTree,
}

pub fn theorem2_fixture(n: usize) -> Result<Theorem2Fixture> {
    if n < 2 {
        return Err(Error::InvalidConfig("the two-star fixture needs n >= 2".into()));
    }
    let v = |i: usize| format!("v{i}");
    let w = |j: usize| format!("w{j}");
    let star = 1.0 / (2 * n) as f64;
    let cross = 1.0 - 1.0 / n as f64;
    let edge = |a: &str, b: &str, cost: f64| EdgeRecord { a: a.into(), b: b.into(), cost: Some(cost) };

    let mut nodes = vec!["a".to_string(), "b".to_string()];
    nodes.extend((1..=n).map(v));
    nodes.extend((1..=n).map(w));
    let mut edges = vec![edge("a", "b", 1.0)];
    for i in 1..=n {
        edges.push(edge("a", &v(i), star));
        edges.push(edge("b", &w(i), star));
        for j in 1..=n {
            edges.push(edge(&v(i), &w(j), cross));
        }
    }
    let topology = Topology::from_file(TopologyFile {
        nodes: nodes.into_iter().map(|id| NodeRecord { id, ..Default::default() }).collect(),
        edges,
        ..Default::default()
    })?;

    let at = |id: &str| topology.index_of(id).expect("fixture node");
    let (a, b) = (at("a"), at("b"));
    let left: Vec<usize> = (1..=n).map(|i| at(&v(i))).collect();
    let right: Vec<usize> = (1..=n).map(|j| at(&w(j))).collect();

    let size = topology.node_count();
    let mut peaks = Peaks::zeros(size);
    for &x in &left {
        for &y in &right {
            peaks.set(x, y, 1.0);
        }
    }
    let mut marginals = vec![1.0; size];
    marginals[a] = 0.0;
    marginals[b] = 0.0;
    let model = CappedHoseModel::new(marginals, peaks)?;

    let between = |x: usize, y: usize| topology.edge_between(x, y).expect("fixture edge");
    let mut tree_edges = vec![between(a, b)];
    tree_edges.extend(left.iter().map(|&x| between(a, x)));
    tree_edges.extend(right.iter().map(|&y| between(b, y)));

    let mut builder = HubTreeBuilder::new(size);
    let mut lower = vec![a];
    lower.extend(&left);
    let hub_a = builder.add_internal(&lower)?;
    let mut upper = vec![hub_a, b];
    upper.extend(&right);
    builder.add_internal(&upper)?;
    let mut hub_tree = builder.build()?;
    hub_tree.populate_capacities(&model)?;

    Ok(Theorem2Fixture { n, topology, model, tree_edges, hub_tree })
}
