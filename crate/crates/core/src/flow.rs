//! Flow networks over `f64` capacities: Dinic max-flow and a successive
//! shortest path solver for maximum-weight flow.

use std::collections::VecDeque;

/// Residual capacities below `scale * RELATIVE_EPS` are treated as zero.
const RELATIVE_EPS: f64 = 1e-13;

pub(crate) type ArcId = usize;

#[derive(Debug, Clone, Default)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<ArcId>>,
    to: Vec<usize>,
    residual: Vec<f64>,
    capacity: Vec<f64>,
    cost: Vec<f64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes], ..Default::default() }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: f64) -> ArcId {
        self.add_arc_with_cost(from, to, capacity, 0.0)
    }

    /// Adds `from -> to` and its residual twin; returns the forward arc.
    pub fn add_arc_with_cost(&mut self, from: usize, to: usize, capacity: f64, cost: f64) -> ArcId {
        debug_assert!(capacity >= 0.0);
        let id = self.to.len();
        self.adj[from].push(id);
        self.to.push(to);
        self.residual.push(capacity);
        self.capacity.push(capacity);
        self.cost.push(cost);
        self.adj[to].push(id + 1);
        self.to.push(from);
        self.residual.push(0.0);
        self.capacity.push(0.0);
        self.cost.push(-cost);
        id
    }

    /// Flow currently on forward arc `arc`.
    pub fn flow(&self, arc: ArcId) -> f64 {
        self.residual[arc ^ 1]
    }

    fn eps(&self) -> f64 {
        self.capacity.iter().fold(0.0, |m: f64, &c| m.max(c)) * RELATIVE_EPS
    }

    /// Dinic's algorithm; returns the value of a maximum `s`-`t` flow.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        if s == t {
            return 0.0;
        }
        let eps = self.eps();
        let n = self.adj.len();
        let mut total = 0.0;
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        loop {
            level.fill(usize::MAX);
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let v = self.to[a];
                    if level[v] == usize::MAX && self.residual[a] > eps {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            next.fill(0);
            loop {
                let pushed = self.augment(s, t, f64::INFINITY, eps, &level, &mut next);
                if pushed == 0.0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: f64, eps: f64, level: &[usize], next: &mut [usize]) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let v = self.to[a];
            if self.residual[a] > eps && level[v] == level[u] + 1 {
                let pushed = self.augment(v, t, limit.min(self.residual[a]), eps, level, next);
                if pushed > 0.0 {
                    self.residual[a] -= pushed;
                    self.residual[a ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0.0
    }

    /// Maximizes `-Σ cost(a) flow(a)` over all `s`-`t` flows of any value by
    /// augmenting along negative-cost shortest paths (Bellman-Ford). Returns
    /// the achieved weight. Arc costs must leave the initial residual graph
    /// free of negative cycles.
    pub fn max_weight_flow(&mut self, s: usize, t: usize) -> f64 {
        let eps = self.eps();
        let n = self.adj.len();
        let mut weight = 0.0;
        loop {
            let mut dist = vec![f64::INFINITY; n];
            let mut via = vec![usize::MAX; n];
            let mut in_queue = vec![false; n];
            dist[s] = 0.0;
            let mut queue = VecDeque::from([s]);
            let mut relaxations = 0usize;
            while let Some(u) = queue.pop_front() {
                in_queue[u] = false;
                for &a in &self.adj[u] {
                    let v = self.to[a];
                    if self.residual[a] > eps && dist[u] + self.cost[a] < dist[v] - 1e-12 {
                        dist[v] = dist[u] + self.cost[a];
                        via[v] = a;
                        if !in_queue[v] {
                            in_queue[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
                relaxations += 1;
                assert!(relaxations <= n * self.to.len() + n, "negative residual cycle");
            }
            if dist[t] >= -1e-9 {
                return weight;
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = t;
            while v != s {
                let a = via[v];
                bottleneck = bottleneck.min(self.residual[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.residual[a] -= bottleneck;
                self.residual[a ^ 1] += bottleneck;
                v = self.to[a ^ 1];
            }
            weight -= bottleneck * dist[t];
        }
    }
}
