use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::Topology;
use crate::pair_index;

/// Relative slack under which two path lengths count as equal.
const TIE_TOLERANCE: f64 = 1e-12;

/// All-pairs shortest path lengths plus one canonical path per pair.
///
/// Among all simple shortest `i`-`j` paths (`i < j`), the canonical one has
/// the lexicographically smallest node sequence read from `i`; the `j`-`i`
/// path is its reverse. Lengths within a relative `1e-12` count as equal.
#[derive(Debug, Clone)]
pub struct ShortestPathIndex {
    n: usize,
    dist: Vec<f64>,
    paths: Vec<Vec<usize>>,
    edge_paths: Vec<Vec<usize>>,
}

#[derive(PartialEq)]
struct State(f64, usize);

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(t: &Topology, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; t.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State(0.0, source));
    while let Some(State(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(w, e) in t.neighbors(u) {
            let nd = d + t.edge(e).cost;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(State(nd, w));
            }
        }
    }
    dist
}

/// Whether `target` is reachable from `from` along tight edges without
/// touching `visited`. Only zero-cost ties can make this false.
fn reaches(
    t: &Topology,
    from: usize,
    target: usize,
    visited: &[bool],
    tight: &impl Fn(usize, usize, usize) -> bool,
) -> bool {
    if from == target {
        return true;
    }
    let mut seen = visited.to_vec();
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &(w, e) in t.neighbors(u) {
            if !seen[w] && tight(u, w, e) {
                if w == target {
                    return true;
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

fn is_tight(through: f64, direct: f64) -> bool {
    (through - direct).abs() <= TIE_TOLERANCE * through.max(direct)
}

impl ShortestPathIndex {
    pub fn new(t: &Topology) -> Self {
        let n = t.node_count();
        let mut dist = vec![0.0; n * n];
        let mut paths = vec![Vec::new(); n * (n - 1) / 2];
        let mut edge_paths = vec![Vec::new(); n * (n - 1) / 2];

        for target in 0..n {
            let to_target = dijkstra(t, target);
            let tight = |u: usize, w: usize, e: usize| is_tight(t.edge(e).cost + to_target[w], to_target[u]);

            for source in 0..target {
                let mut path = vec![source];
                let mut edges = Vec::new();
                let mut visited = vec![false; n];
                visited[source] = true;
                let mut u = source;
                while u != target {
                    let &(w, e) = t
                        .neighbors(u)
                        .iter()
                        .find(|&&(w, e)| !visited[w] && tight(u, w, e) && reaches(t, w, target, &visited, &tight))
                        .expect("a shortest-path successor always reaches the target");
                    visited[w] = true;
                    path.push(w);
                    edges.push(e);
                    u = w;
                }
                let k = pair_index(n, source, target);
                paths[k] = path;
                edge_paths[k] = edges;
                dist[source * n + target] = to_target[source];
                dist[target * n + source] = to_target[source];
            }
        }
        ShortestPathIndex { n, dist, paths, edge_paths }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Canonical shortest path from `i` to `j` as a node sequence.
    pub fn path(&self, i: usize, j: usize) -> Vec<usize> {
        match i.cmp(&j) {
            Ordering::Equal => vec![i],
            Ordering::Less => self.paths[pair_index(self.n, i, j)].clone(),
            Ordering::Greater => {
                let mut p = self.paths[pair_index(self.n, i, j)].clone();
                p.reverse();
                p
            }
        }
    }

    /// Edge indices along the canonical path between `i` and `j`, in the order
    /// walked from `min(i, j)`. Empty when `i == j`.
    pub fn path_edges(&self, i: usize, j: usize) -> &[usize] {
        if i == j {
            &[]
        } else {
            &self.edge_paths[pair_index(self.n, i, j)]
        }
    }
}
