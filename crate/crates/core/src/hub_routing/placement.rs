use super::HubTree;
use crate::topology::ShortestPathIndex;
use crate::{pair_index, pairs, Error, Result};

/// Images of hub-tree nodes in the topology; leaves map to themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubMap {
    eta: Vec<usize>,
}

impl HubMap {
    /// Validates `eta` against `tree` and a topology of `nodes` nodes.
    pub fn new(tree: &HubTree, eta: Vec<usize>, nodes: usize) -> Result<Self> {
        if eta.len() != tree.node_count() {
            return Err(Error::DimensionMismatch { expected: tree.node_count(), actual: eta.len() });
        }
        if tree.leaf_count() != nodes {
            return Err(Error::DimensionMismatch { expected: nodes, actual: tree.leaf_count() });
        }
        if let Some(v) = (0..tree.leaf_count()).find(|&v| eta[v] != v) {
            return Err(Error::InvalidHubTree(format!("leaf {v} is mapped to {}", eta[v])));
        }
        if let Some(&g) = eta.iter().find(|&&g| g >= nodes) {
            return Err(Error::DimensionMismatch { expected: nodes, actual: g + 1 });
        }
        Ok(HubMap { eta })
    }

    /// Every internal node mapped to `hub`.
    pub fn single_hub(tree: &HubTree, hub: usize) -> Self {
        let eta = (0..tree.node_count()).map(|v| if tree.is_leaf(v) { v } else { hub }).collect();
        HubMap { eta }
    }

    pub fn image(&self, v: usize) -> usize {
        self.eta[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.eta
    }

    /// Number of distinct topology nodes hosting internal tree nodes.
    pub fn distinct_hubs(&self, tree: &HubTree) -> usize {
        let mut hubs: Vec<usize> = tree.internal_nodes().map(|v| self.eta[v]).collect();
        hubs.sort_unstable();
        hubs.dedup();
        hubs.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub map: HubMap,
    pub cost: f64,
}

/// `Σ_e u(e) · dist(η(child), η(parent))` over all tree edges.
pub fn hh_cost(tree: &HubTree, eta: &HubMap, idx: &ShortestPathIndex) -> Result<f64> {
    let mut total = 0.0;
    for (c, p) in tree.edges() {
        total += tree.capacity(c)? * idx.dist(eta.image(c), eta.image(p));
    }
    Ok(total)
}

/// Optimal hub placement by dynamic programming from the tree's root.
pub fn place_hubs(tree: &HubTree, idx: &ShortestPathIndex) -> Result<Placement> {
    place_hubs_rooted(tree, idx, tree.root())
}

/// Optimal hub placement with the recursion rooted at internal node `root`.
///
/// `C(v, g)` is the cheapest cost of the subtree hanging below `v` when `v`
/// sits at `g`; a child `c` at `h` adds `C(c, h) + u(vc) · dist(g, h)`.
/// Ties resolve to the smallest topology node.
pub fn place_hubs_rooted(tree: &HubTree, idx: &ShortestPathIndex, root: usize) -> Result<Placement> {
    let n = idx.node_count();
    if tree.leaf_count() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: tree.leaf_count() });
    }
    if tree.is_leaf(root) || root >= tree.node_count() {
        return Err(Error::InvalidHubTree(format!("{root} is not an internal node")));
    }
    let size = tree.node_count();
    // orient away from `root`; `order` lists parents before children
    let mut up = vec![usize::MAX; size];
    let mut order = vec![root];
    up[root] = root;
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        for w in tree.neighbors(v) {
            if up[w] == usize::MAX {
                up[w] = v;
                order.push(w);
            }
        }
        k += 1;
    }
    let mut cost = vec![Vec::new(); size];
    // choice[c][g]: image of child c when its parent sits at g
    let mut choice = vec![Vec::new(); size];
    for &v in order.iter().rev() {
        if tree.is_leaf(v) {
            let mut base = vec![f64::INFINITY; n];
            base[v] = 0.0;
            cost[v] = base;
            continue;
        }
        let mut total = vec![0.0; n];
        for c in tree.neighbors(v).filter(|&c| c != up[v]) {
            let u = tree.capacity(tree.edge_between(v, c).unwrap())?;
            let mut pick = vec![0; n];
            for g in 0..n {
                let mut best = f64::INFINITY;
                for h in 0..n {
                    if cost[c][h] == f64::INFINITY {
                        continue;
                    }
                    let value = cost[c][h] + u * idx.dist(g, h);
                    if value < best {
                        best = value;
                        pick[g] = h;
                    }
                }
                total[g] += best;
            }
            choice[c] = pick;
        }
        cost[v] = total;
    }
    let mut eta = vec![0; size];
    let mut best = f64::INFINITY;
    for g in 0..n {
        if cost[root][g] < best {
            best = cost[root][g];
            eta[root] = g;
        }
    }
    for &v in order.iter().skip(1) {
        eta[v] = choice[v][eta[up[v]]];
    }
    Ok(Placement { map: HubMap { eta }, cost: best })
}

/// A walk in the topology for every unordered terminal pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingTemplate {
    n: usize,
    walks: Vec<Vec<usize>>,
}

impl RoutingTemplate {
    /// `walk(i, j)` for each `(i, j)` with `i < j`, in [`crate::pairs`] order.
    pub fn from_fn(n: usize, mut walk: impl FnMut(usize, usize) -> Vec<usize>) -> Result<Self> {
        let walks: Vec<Vec<usize>> = pairs(n).map(|(i, j)| walk(i, j)).collect();
        for ((i, j), w) in pairs(n).zip(&walks) {
            if w.first() != Some(&i) || w.last() != Some(&j) {
                return Err(Error::InvalidTemplate(format!("walk for ({i}, {j}) has wrong endpoints")));
            }
        }
        Ok(RoutingTemplate { n, walks })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// The walk between `i` and `j`, oriented from the smaller index.
    pub fn walk(&self, i: usize, j: usize) -> &[usize] {
        &self.walks[pair_index(self.n, i, j)]
    }

    pub fn walks(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> {
        pairs(self.n).zip(self.walks.iter().map(Vec::as_slice))
    }
}

/// Joins canonical shortest paths between consecutive hub images along each
/// leaf-to-leaf tree path.
pub fn hh_template(tree: &HubTree, eta: &HubMap, idx: &ShortestPathIndex) -> Result<RoutingTemplate> {
    RoutingTemplate::from_fn(idx.node_count(), |i, j| {
        let hubs = tree.path(i, j);
        let mut walk = vec![i];
        for w in hubs.windows(2) {
            let (a, b) = (eta.image(w[0]), eta.image(w[1]));
            if a != b {
                walk.extend(idx.path(a, b).into_iter().skip(1));
            }
        }
        walk
    })
}
