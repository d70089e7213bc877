//! Hub trees, hub placement and hierarchical-hub routing templates.
//!
//! A [`HubTree`] over `n` terminals numbers its nodes so that `0..n` are the
//! leaves (leaf `v` is terminal `v`) and `n..` are the internal hubs. Every
//! non-root node owns the edge to its parent, so tree edges are identified by
//! their child node.

mod btsm;
mod json;
mod placement;

pub use btsm::btsm;
pub use json::HubTreeJson;
pub use placement::{hh_cost, hh_template, place_hubs, place_hubs_rooted, HubMap, Placement, RoutingTemplate};

use crate::demand_oracle::fundamental_cut_capacity;
use crate::traffic::CappedHoseModel;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HubTree {
    leaves: usize,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    root: usize,
    capacity: Vec<Option<f64>>,
}

/// Incremental construction: leaves exist up front and each call to
/// [`HubTreeBuilder::add_internal`] adopts current roots as children.
#[derive(Debug, Clone)]
pub struct HubTreeBuilder {
    leaves: usize,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl HubTreeBuilder {
    pub fn new(leaves: usize) -> Self {
        HubTreeBuilder { leaves, children: vec![Vec::new(); leaves], parent: vec![None; leaves] }
    }

    /// Adds a hub whose children are the given parentless nodes; returns its id.
    pub fn add_internal(&mut self, children: &[usize]) -> Result<usize> {
        if children.len() < 2 {
            return Err(Error::InvalidHubTree("internal nodes need at least two children".into()));
        }
        let id = self.parent.len();
        for (k, &c) in children.iter().enumerate() {
            if c >= id {
                return Err(Error::InvalidHubTree(format!("unknown tree node {c}")));
            }
            if self.parent[c].is_some() || children[..k].contains(&c) {
                return Err(Error::InvalidHubTree(format!("tree node {c} already has a parent")));
            }
        }
        for &c in children {
            self.parent[c] = Some(id);
        }
        self.children.push(children.to_vec());
        self.parent.push(None);
        Ok(id)
    }

    pub fn build(self) -> Result<HubTree> {
        if self.leaves < 2 {
            return Err(Error::InvalidHubTree("a hub tree needs at least two leaves".into()));
        }
        let roots: Vec<usize> = (0..self.parent.len()).filter(|&v| self.parent[v].is_none()).collect();
        match roots[..] {
            [root] => Ok(HubTree {
                leaves: self.leaves,
                capacity: vec![None; self.parent.len()],
                children: self.children,
                parent: self.parent,
                root,
            }),
            _ => Err(Error::InvalidHubTree(format!("{} components remain", roots.len()))),
        }
    }
}

impl HubTree {
    /// One hub adjacent to every leaf.
    pub fn star(leaves: usize) -> Result<Self> {
        let mut b = HubTreeBuilder::new(leaves);
        b.add_internal(&(0..leaves).collect::<Vec<_>>())?;
        b.build()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn internal_nodes(&self) -> std::ops::Range<usize> {
        self.leaves..self.node_count()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.leaves
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Tree edges as `(child, parent)`, identified by the child.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).filter_map(|v| self.parent[v].map(|p| (v, p)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }

    /// Tree neighbors of `v`: children then parent.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.children[v].iter().copied().chain(self.parent[v])
    }

    /// Every internal node has exactly two children.
    pub fn is_binary(&self) -> bool {
        self.internal_nodes().all(|v| self.children[v].len() == 2)
    }

    /// The tree edge joining adjacent nodes `u` and `v`.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if self.parent[u] == Some(v) {
            Some(u)
        } else if self.parent[v] == Some(u) {
            Some(v)
        } else {
            None
        }
    }

    fn check_edge(&self, edge: usize) -> Result<()> {
        if edge >= self.node_count() || edge == self.root {
            return Err(Error::InvalidHubTree(format!("{edge} is not a tree edge")));
        }
        Ok(())
    }

    /// Sorted leaves in the subtree of `v`.
    pub fn leaves_under(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.is_leaf(u) {
                out.push(u);
            } else {
                stack.extend(&self.children[u]);
            }
        }
        out.sort_unstable();
        out
    }

    /// The two leaf sets separated by removing `edge`: below it, then the rest.
    pub fn fundamental_cut(&self, edge: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        self.check_edge(edge)?;
        let below = self.leaves_under(edge);
        let mut inside = vec![false; self.leaves];
        for &v in &below {
            inside[v] = true;
        }
        let above = (0..self.leaves).filter(|&v| !inside[v]).collect();
        Ok((below, above))
    }

    pub fn capacity(&self, edge: usize) -> Result<f64> {
        self.check_edge(edge)?;
        self.capacity[edge].ok_or(Error::MissingCapacity(edge))
    }

    pub fn set_capacity(&mut self, edge: usize, capacity: f64) -> Result<()> {
        self.check_edge(edge)?;
        if !(capacity.is_finite() && capacity >= 0.0) {
            return Err(Error::InvalidHubTree(format!("edge {edge} has invalid capacity {capacity}")));
        }
        self.capacity[edge] = Some(capacity);
        Ok(())
    }

    pub fn has_capacities(&self) -> bool {
        self.edges().all(|(c, _)| self.capacity[c].is_some())
    }

    /// Sets every edge capacity to its fundamental-cut capacity under `m`.
    pub fn populate_capacities(&mut self, m: &CappedHoseModel) -> Result<()> {
        let edges: Vec<usize> = self.edges().map(|(c, _)| c).collect();
        for e in edges {
            let cap = fundamental_cut_capacity(m, self, e)?;
            self.capacity[e] = Some(cap);
        }
        Ok(())
    }

    /// Tree nodes from leaf `i` to leaf `j` along the unique tree path.
    pub fn path(&self, i: usize, j: usize) -> Vec<usize> {
        let depth = |mut v: usize| {
            let mut d = 0;
            while let Some(p) = self.parent[v] {
                v = p;
                d += 1;
            }
            d
        };
        let (mut a, mut b) = (i, j);
        let (mut da, mut db) = (depth(a), depth(b));
        let mut up = vec![a];
        let mut down = vec![b];
        while da > db {
            a = self.parent[a].unwrap();
            da -= 1;
            up.push(a);
        }
        while db > da {
            b = self.parent[b].unwrap();
            db -= 1;
            down.push(b);
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
            up.push(a);
            down.push(b);
        }
        down.pop();
        up.extend(down.into_iter().rev());
        up
    }
}
