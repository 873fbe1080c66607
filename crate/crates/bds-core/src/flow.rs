//! Max-flow feasibility with optional lower bounds.
//!
//! Dinic's algorithm over a small dense arc list, plus the standard
//! transformation that reduces flow feasibility with per-arc lower bounds
//! to a plain max-flow between a super source and super sink. Arc order is
//! insertion order throughout, so results are deterministic.

use alloc::vec::Vec;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
}

/// Plain max-flow network (Dinic).
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self { arcs: Vec::new(), adj: alloc::vec![Vec::new(); nodes] }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds a forward arc with capacity `cap` (and its residual). Returns
    /// the forward arc id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        debug_assert!(cap >= 0);
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.adj[from].push(id);
        self.arcs.push(Arc { to: from, cap: 0 });
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently carried by a forward arc (residual of its reverse).
    pub fn flow_on(&self, arc_id: usize) -> i64 {
        self.arcs[arc_id ^ 1].cap
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0i64;
        let mut level = alloc::vec![-1i32; n];
        let mut iter = alloc::vec![0usize; n];
        loop {
            // BFS level graph
            for l in level.iter_mut() {
                *l = -1;
            }
            let mut queue = alloc::collections::VecDeque::new();
            level[source] = 0;
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let arc = &self.arcs[a];
                    if arc.cap > 0 && level[arc.to] < 0 {
                        level[arc.to] = level[u] + 1;
                        queue.push_back(arc.to);
                    }
                }
            }
            if level[sink] < 0 {
                return total;
            }
            for it in iter.iter_mut() {
                *it = 0;
            }
            loop {
                let pushed = self.dfs(source, sink, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn dfs(&mut self, u: usize, sink: usize, limit: i64, level: &[i32], iter: &mut [usize]) -> i64 {
        if u == sink {
            return limit;
        }
        while iter[u] < self.adj[u].len() {
            let a = self.adj[u][iter[u]];
            let (to, cap) = {
                let arc = &self.arcs[a];
                (arc.to, arc.cap)
            };
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.dfs(to, sink, limit.min(cap), level, iter);
                if pushed > 0 {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }
}

/// Flow feasibility problem with per-arc lower bounds, solved by the
/// circulation transformation: each arc `[l, c]` becomes an arc of
/// capacity `c - l` while `l` units are routed through a super
/// source/sink pair; adding a sink->source arc of unbounded capacity
/// turns s-t feasibility into circulation feasibility.
#[derive(Debug, Clone)]
pub struct LowerBoundFlow {
    nodes: usize,
    arcs: Vec<(usize, usize, i64, i64)>, // from, to, lower, upper
}

impl LowerBoundFlow {
    pub fn new(nodes: usize) -> Self {
        Self { nodes, arcs: Vec::new() }
    }

    /// Adds an arc with bounds `lower..=upper`; returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, lower: i64, upper: i64) -> usize {
        debug_assert!(0 <= lower && lower <= upper);
        self.arcs.push((from, to, lower, upper));
        self.arcs.len() - 1
    }

    /// Decides whether an s-t flow respecting all bounds exists; on
    /// success returns the flow value per arc (in input order).
    pub fn feasible_flow(&self, source: usize, sink: usize) -> Option<Vec<i64>> {
        let big = 1 + self.arcs.iter().map(|&(_, _, _, u)| u).sum::<i64>();
        let mut net = FlowNetwork::new(self.nodes + 2);
        let super_source = self.nodes;
        let super_sink = self.nodes + 1;
        let mut excess = alloc::vec![0i64; self.nodes];
        let mut inner_ids = Vec::with_capacity(self.arcs.len());
        for &(from, to, lower, upper) in &self.arcs {
            inner_ids.push(net.add_arc(from, to, upper - lower));
            excess[to] += lower;
            excess[from] -= lower;
        }
        net.add_arc(sink, source, big);
        let mut need = 0i64;
        for (node, &e) in excess.iter().enumerate() {
            if e > 0 {
                net.add_arc(super_source, node, e);
                need += e;
            } else if e < 0 {
                net.add_arc(node, super_sink, -e);
            }
        }
        if net.max_flow(super_source, super_sink) != need {
            return None;
        }
        Some(
            self.arcs
                .iter()
                .zip(inner_ids)
                .map(|(&(_, _, lower, _), id)| lower + net.flow_on(id))
                .collect(),
        )
    }
}
