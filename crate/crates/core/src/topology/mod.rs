//! Network topology: nodes, cost-weighted undirected edges and the file format
//! they are loaded from.

mod shortest_paths;

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use shortest_paths::ShortestPathIndex;

/// Mean Earth radius in kilometres, used for great-circle distances.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// How node coordinates are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinateSystem {
    /// Planar `(x, y)`; distances are Euclidean.
    #[default]
    Euclidean,
    /// `x` is longitude and `y` latitude, both in degrees; distances are
    /// great-circle kilometres.
    Geographic,
}

impl CoordinateSystem {
    pub fn as_str(self) -> &'static str {
        match self {
            CoordinateSystem::Euclidean => "euclidean",
            CoordinateSystem::Geographic => "geographic",
        }
    }
}

/// Distance between two coordinate pairs under `system`.
pub fn geo_distance(system: CoordinateSystem, a: (f64, f64), b: (f64, f64)) -> f64 {
    match system {
        CoordinateSystem::Euclidean => (a.0 - b.0).hypot(a.1 - b.1),
        CoordinateSystem::Geographic => {
            if a == b {
                return 0.0;
            }
            let (lon1, lat1) = (a.0.to_radians(), a.1.to_radians());
            let (lon2, lat2) = (b.0.to_radians(), b.1.to_radians());
            let h = ((lat2 - lat1) / 2.0).sin().powi(2)
                + lat1.cos() * lat2.cos() * ((lon2 - lon1) / 2.0).sin().powi(2);
            2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
        }
    }
}

/// On-disk topology document.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyFile {
    #[serde(default)]
    pub coordinate_system: CoordinateSystem,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub coords: Option<(f64, f64)>,
    pub population: Option<f64>,
}

/// An undirected edge with `a < b` (node indices) and its per-unit cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub cost: f64,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// A validated, connected, simple undirected graph.
///
/// Nodes are indexed `0..n` in lexicographic order of their ids, so index
/// order and id order agree; edges are indexed in `(a, b)` order.
#[derive(Debug, Clone)]
pub struct Topology {
    coordinate_system: CoordinateSystem,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    ids: HashMap<String, usize>,
    edge_ids: HashMap<(usize, usize), usize>,
    /// `(neighbor, edge)` per node, sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Topology {
    /// Parses and validates a topology document.
    pub fn parse(source: &str) -> Result<Self> {
        let file: TopologyFile = serde_json::from_str(source)?;
        Self::from_file(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let source = std::fs::read_to_string(path)?;
        Self::parse(&source)
    }

    pub fn from_file(file: TopologyFile) -> Result<Self> {
        let system = file.coordinate_system;
        if file.nodes.is_empty() {
            return Err(Error::InvalidTopology("no nodes".into()));
        }
        let mut records = file.nodes;
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let mut nodes = Vec::with_capacity(records.len());
        for r in records {
            if nodes.last().is_some_and(|n: &Node| n.id == r.id) {
                return Err(Error::InvalidTopology(format!("duplicate node id {}", r.id)));
            }
            let coords = match (r.x, r.y) {
                (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Some((x, y)),
                (None, None) => None,
                _ => {
                    return Err(Error::InvalidTopology(format!(
                        "node {} has incomplete or non-finite coordinates",
                        r.id
                    )))
                }
            };
            if let Some(p) = r.population {
                if !(p.is_finite() && p >= 0.0) {
                    return Err(Error::InvalidTopology(format!(
                        "node {} has invalid population {p}",
                        r.id
                    )));
                }
            }
            nodes.push(Node { id: r.id, coords, population: r.population });
        }
        let ids: HashMap<String, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();

        let mut edges = Vec::with_capacity(file.edges.len());
        for e in &file.edges {
            let a = *ids.get(&e.a).ok_or_else(|| Error::UnknownNode(e.a.clone()))?;
            let b = *ids.get(&e.b).ok_or_else(|| Error::UnknownNode(e.b.clone()))?;
            if a == b {
                return Err(Error::InvalidTopology(format!("self-loop at {}", e.a)));
            }
            let cost = match e.cost {
                Some(c) => c,
                None => {
                    let pa = nodes[a].coords.ok_or_else(|| Error::MissingCoordinates(e.a.clone()))?;
                    let pb = nodes[b].coords.ok_or_else(|| Error::MissingCoordinates(e.b.clone()))?;
                    geo_distance(system, pa, pb)
                }
            };
            if !(cost.is_finite() && cost >= 0.0) {
                return Err(Error::InvalidCost(e.a.clone(), e.b.clone(), cost));
            }
            edges.push(Edge { a: a.min(b), b: a.max(b), cost });
        }
        edges.sort_by_key(|e| (e.a, e.b));
        let mut edge_ids = HashMap::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (k, e) in edges.iter().enumerate() {
            if edge_ids.insert((e.a, e.b), k).is_some() {
                return Err(Error::DuplicateEdge(nodes[e.a].id.clone(), nodes[e.b].id.clone()));
            }
            adjacency[e.a].push((e.b, k));
            adjacency[e.b].push((e.a, k));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }

        let topology = Topology { coordinate_system: system, nodes, edges, ids, edge_ids, adjacency };
        topology.check_connected()?;
        Ok(topology)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(Error::Disconnected(self.nodes[v].id.clone(), self.nodes[0].id.clone())),
            None => Ok(()),
        }
    }

    /// Serializable form, with every edge cost written explicitly.
    pub fn to_file(&self) -> TopologyFile {
        TopologyFile {
            coordinate_system: self.coordinate_system,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRecord {
                    id: n.id.clone(),
                    x: n.coords.map(|c| c.0),
                    y: n.coords.map(|c| c.1),
                    population: n.population,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    a: self.nodes[e.a].id.clone(),
                    b: self.nodes[e.b].id.clone(),
                    cost: Some(e.cost),
                })
                .collect(),
        }
    }

    pub fn coordinate_system(&self) -> CoordinateSystem {
        self.coordinate_system
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, v: usize) -> &Node {
        &self.nodes[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn id(&self, v: usize) -> &str {
        &self.nodes[v].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.get(id).copied()
    }

    /// Edge index joining `u` and `v`, if adjacent.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_ids.get(&(u.min(v), u.max(v))).copied()
    }

    /// `(neighbor, edge)` pairs of `v`, sorted by neighbor index.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Distance between the coordinates of `u` and `v`.
    pub fn geo_distance(&self, u: usize, v: usize) -> Result<f64> {
        let a = self.nodes[u].coords.ok_or_else(|| Error::MissingCoordinates(self.nodes[u].id.clone()))?;
        let b = self.nodes[v].coords.ok_or_else(|| Error::MissingCoordinates(self.nodes[v].id.clone()))?;
        Ok(geo_distance(self.coordinate_system, a, b))
    }
}
