//! One-inclusion hypergraph and exact min-max L-outdegree orientation.
//!
//! Vertices are the patterns of a projection; for each direction `i` and
//! off-`i` pattern, the set of all patterns agreeing off `i` forms one
//! edge, so every vertex is adjacent to exactly `m` edges. A list
//! orientation selects at most `L` member vertices per edge; a vertex
//! pays one unit of outdegree for every incident edge that fails to
//! select it.
//!
//! The solver is exact: binary search on the achievable maximum
//! outdegree `t`, deciding each `t` by a flow feasibility problem (each
//! edge may select at most `min(L, |e|)` members, each vertex must be
//! selected by at least `deg(v) - t` incident edges; the per-vertex
//! lower bounds are handled by the standard circulation transformation).
//! Among optimal orientations the returned one is canonical: every edge
//! selects exactly `min(L, |e|)` members and, processing edges in
//! canonical order, each selection set is the lexicographically smallest
//! completable one under canonical vertex order.

use alloc::vec::Vec;

use serde::Serialize;

use crate::concept_class::ProjectedClass;
use crate::error::Error;
use crate::flow::{FlowNetwork, LowerBoundFlow};
use crate::rat::{rat_int, Rat};
use crate::Result;

/// One hyperedge: all vertices agreeing with `off_pattern` outside
/// `direction`. `members` are vertex ids in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub direction: usize,
    pub off_pattern: Vec<u16>,
    pub members: Vec<usize>,
}

/// One-inclusion hypergraph over the patterns of a projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneInclusionGraph {
    arity: usize,
    vertices: Vec<Vec<u16>>,
    edges: Vec<GraphEdge>,
    /// `incident[v][i]` is the direction-`i` edge adjacent to vertex `v`.
    incident: Vec<Vec<usize>>,
}

/// Builds the graph; edges are ordered by (direction, off-pattern), which
/// fixes every downstream iteration order.
pub fn build_graph(proj: &ProjectedClass) -> OneInclusionGraph {
    let arity = proj.arity();
    let vertices: Vec<Vec<u16>> = proj.patterns().to_vec();
    let mut edges = Vec::new();
    let mut incident = alloc::vec![alloc::vec![usize::MAX; arity]; vertices.len()];
    for direction in 0..arity {
        for (off_pattern, members) in proj.direction_buckets(direction) {
            let id = edges.len();
            for &v in &members {
                incident[v][direction] = id;
            }
            edges.push(GraphEdge { direction, off_pattern, members });
        }
    }
    OneInclusionGraph { arity, vertices, edges, incident }
}

impl OneInclusionGraph {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vertices(&self) -> &[Vec<u16>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn vertex_id(&self, v: &[u16]) -> Option<usize> {
        self.vertices.binary_search_by(|w| w.as_slice().cmp(v)).ok()
    }

    /// Edge ids incident to a vertex, one per direction.
    pub fn incident_edges(&self, vertex: usize) -> &[usize] {
        &self.incident[vertex]
    }

    /// Looks up the direction-`direction` edge with the given off-pattern.
    pub fn edge_lookup(&self, direction: usize, off_pattern: &[u16]) -> Option<usize> {
        self.edges
            .binary_search_by(|e| {
                (e.direction, e.off_pattern.as_slice()).cmp(&(direction, off_pattern))
            })
            .ok()
    }

    /// Number of incident edges larger than `l`.
    pub fn l_degree(&self, v: &[u16], l: u32) -> Result<usize> {
        let vid = self.vertex_id(v).ok_or(Error::UnknownVertex)?;
        Ok(self.incident[vid]
            .iter()
            .filter(|&&e| self.edges[e].members.len() > l as usize)
            .count())
    }

    /// Average L-degree: the total size of edges larger than `l`, divided
    /// by the number of vertices.
    pub fn avg_l_degree(&self, l: u32) -> Rat {
        let total: i64 = self
            .edges
            .iter()
            .filter(|e| e.members.len() > l as usize)
            .map(|e| e.members.len() as i64)
            .sum();
        rat_int(total) / rat_int(self.vertices.len() as i64)
    }
}

/// Per-edge vertex selections, at most `list_size` each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ListOrientation {
    pub list_size: u32,
    /// `selected[e]` are vertex ids, ascending, a subset of edge `e`.
    pub selected: Vec<Vec<usize>>,
}

impl ListOrientation {
    /// Checks the structural contract against a graph.
    pub fn validate(&self, graph: &OneInclusionGraph) -> Result<()> {
        if self.selected.len() != graph.edges.len() {
            return Err(Error::InvalidOrientation(
                "selection count differs from edge count".into(),
            ));
        }
        for (e, sel) in self.selected.iter().enumerate() {
            if sel.len() > self.list_size as usize {
                return Err(Error::InvalidOrientation(alloc::format!(
                    "edge {e} selects more than L={} vertices",
                    self.list_size
                )));
            }
            if sel.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidOrientation(alloc::format!(
                    "edge {e} selection not strictly ascending"
                )));
            }
            for &v in sel {
                if !graph.edges[e].members.contains(&v) {
                    return Err(Error::InvalidOrientation(alloc::format!(
                        "edge {e} selects non-member vertex {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn outdegree_by_id(graph: &OneInclusionGraph, orientation: &ListOrientation, vid: usize) -> usize {
    graph.incident[vid]
        .iter()
        .filter(|&&e| !orientation.selected[e].contains(&vid))
        .count()
}

/// Number of incident edges that fail to select `v`.
pub fn outdegree(
    graph: &OneInclusionGraph,
    orientation: &ListOrientation,
    v: &[u16],
) -> Result<usize> {
    orientation.validate(graph)?;
    let vid = graph.vertex_id(v).ok_or(Error::UnknownVertex)?;
    Ok(outdegree_by_id(graph, orientation, vid))
}

/// Maximum outdegree over all vertices.
pub fn max_outdegree(graph: &OneInclusionGraph, orientation: &ListOrientation) -> Result<usize> {
    orientation.validate(graph)?;
    Ok((0..graph.vertices.len())
        .map(|vid| outdegree_by_id(graph, orientation, vid))
        .max()
        .unwrap_or(0))
}

/// Some orientation with maximum outdegree at most `t`, if one exists.
/// Decided exactly via a feasibility flow with lower bounds; the returned
/// selections are then topped up to `min(L, |e|)` with the smallest
/// unselected members (which can only lower outdegrees).
pub fn feasible_orientation(
    graph: &OneInclusionGraph,
    l: u32,
    t: usize,
) -> Option<ListOrientation> {
    let num_edges = graph.edges.len();
    let num_vertices = graph.vertices.len();
    let m = graph.arity;
    // node layout: 0 = source, 1..=E edges, E+1..=E+V vertices, last = sink
    let source = 0usize;
    let edge_node = |e: usize| 1 + e;
    let vertex_node = |v: usize| 1 + num_edges + v;
    let sink = 1 + num_edges + num_vertices;
    let mut net = LowerBoundFlow::new(sink + 1);
    let mut member_arcs: Vec<Vec<usize>> = Vec::with_capacity(num_edges);
    for (e, edge) in graph.edges.iter().enumerate() {
        let cap = (l as usize).min(edge.members.len()) as i64;
        net.add_arc(source, edge_node(e), 0, cap);
        member_arcs.push(
            edge.members
                .iter()
                .map(|&v| net.add_arc(edge_node(e), vertex_node(v), 0, 1))
                .collect(),
        );
    }
    for v in 0..num_vertices {
        let lower = m.saturating_sub(t) as i64;
        net.add_arc(vertex_node(v), sink, lower, m as i64);
    }
    let flows = net.feasible_flow(source, sink)?;
    let mut selected: Vec<Vec<usize>> = Vec::with_capacity(num_edges);
    for (e, edge) in graph.edges.iter().enumerate() {
        let mut sel: Vec<usize> = edge
            .members
            .iter()
            .zip(&member_arcs[e])
            .filter(|(_, &arc)| flows[arc] == 1)
            .map(|(&v, _)| v)
            .collect();
        let cap = (l as usize).min(edge.members.len());
        for &v in &edge.members {
            if sel.len() >= cap {
                break;
            }
            if !sel.contains(&v) {
                sel.push(v);
            }
        }
        sel.sort_unstable();
        selected.push(sel);
    }
    Some(ListOrientation { list_size: l, selected })
}

/// Completion feasibility for the canonical greedy pass: edges before
/// `current` are fixed, the current edge has `sel` chosen and everything
/// before `next_member_pos` rejected, later edges are free. True iff some
/// completion keeps every outdegree at most `t`.
fn completion_feasible(
    graph: &OneInclusionGraph,
    l: u32,
    t: usize,
    fixed: &[Vec<usize>],
    current: usize,
    sel: &[usize],
    next_member_pos: usize,
) -> bool {
    let num_edges = graph.edges.len();
    let num_vertices = graph.vertices.len();
    let m = graph.arity;
    let mut coverage = alloc::vec![0usize; num_vertices];
    for sel_set in fixed.iter() {
        for &v in sel_set {
            coverage[v] += 1;
        }
    }
    for &v in sel {
        coverage[v] += 1;
    }
    // source = 0, slot node per free/current edge, vertex nodes, sink
    let source = 0usize;
    let edge_node = |e: usize| 1 + e;
    let vertex_node = |v: usize| 1 + num_edges + v;
    let sink = 1 + num_edges + num_vertices;
    let mut net = FlowNetwork::new(sink + 1);
    let cap_current = (l as usize).min(graph.edges[current].members.len());
    let slots_left = cap_current - sel.len();
    net.add_arc(source, edge_node(current), slots_left as i64);
    for &v in &graph.edges[current].members[next_member_pos..] {
        net.add_arc(edge_node(current), vertex_node(v), 1);
    }
    for e in current + 1..num_edges {
        let cap = (l as usize).min(graph.edges[e].members.len()) as i64;
        net.add_arc(source, edge_node(e), cap);
        for &v in &graph.edges[e].members {
            net.add_arc(edge_node(e), vertex_node(v), 1);
        }
    }
    let mut required = 0i64;
    for v in 0..num_vertices {
        let need = (m.saturating_sub(t)).saturating_sub(coverage[v]);
        if need > 0 {
            net.add_arc(vertex_node(v), sink, need as i64);
            required += need as i64;
        }
    }
    net.max_flow(source, sink) == required
}

/// Exact minimizer of the maximum outdegree over all valid L-list
/// orientations, with the canonical (lexicographically minimal,
/// full-size) selection sets. Returns the orientation and the achieved
/// maximum.
pub fn min_max_outdegree_orientation(
    graph: &OneInclusionGraph,
    l: u32,
) -> (ListOrientation, usize) {
    let m = graph.arity;
    // smallest feasible t in [0, m]; t = m is always feasible
    let (mut lo, mut hi) = (0usize, m);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible_orientation(graph, l, mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let t_star = lo;
    // canonical greedy: per edge, pick the lexicographically smallest
    // completable selection of exactly min(L, |e|) members
    let mut fixed: Vec<Vec<usize>> = Vec::with_capacity(graph.edges.len());
    for e in 0..graph.edges.len() {
        let members = &graph.edges[e].members;
        let cap = (l as usize).min(members.len());
        let mut sel: Vec<usize> = Vec::with_capacity(cap);
        for (pos, &v) in members.iter().enumerate() {
            if sel.len() == cap {
                break;
            }
            let remaining = members.len() - pos - 1;
            let still_needed = cap - sel.len();
            if remaining < still_needed {
                // every remaining member is forced in
                sel.push(v);
                continue;
            }
            sel.push(v);
            if !completion_feasible(graph, l, t_star, &fixed, e, &sel, pos + 1) {
                sel.pop();
            }
        }
        debug_assert_eq!(sel.len(), cap);
        fixed.push(sel);
    }
    let orientation = ListOrientation { list_size: l, selected: fixed };
    let achieved = max_outdegree(graph, &orientation).expect("canonical orientation is valid");
    debug_assert_eq!(achieved, t_star);
    (orientation, achieved)
}

/// Test-support reference solver: exhaustive search over all full-size
/// selections with pruning. Exposed for the acceptance suite's oracle
/// comparison; not part of the production path.
pub fn brute_force_min_max_outdegree(graph: &OneInclusionGraph, l: u32) -> usize {
    fn feasible(
        graph: &OneInclusionGraph,
        l: u32,
        t: usize,
        edge: usize,
        outdeg: &mut Vec<usize>,
    ) -> bool {
        if edge == graph.edges().len() {
            return true;
        }
        let members = &graph.edges()[edge].members;
        let cap = (l as usize).min(members.len());
        // enumerate cap-subsets of members
        let mut picks: Vec<usize> = (0..cap).collect();
        loop {
            let mut ok = true;
            for (pos, &v) in members.iter().enumerate() {
                if !picks.contains(&pos) {
                    outdeg[v] += 1;
                    if outdeg[v] > t {
                        ok = false;
                    }
                }
            }
            if ok && feasible(graph, l, t, edge + 1, outdeg) {
                for (pos, &v) in members.iter().enumerate() {
                    if !picks.contains(&pos) {
                        outdeg[v] -= 1;
                    }
                }
                return true;
            }
            for (pos, &v) in members.iter().enumerate() {
                if !picks.contains(&pos) {
                    outdeg[v] -= 1;
                }
            }
            // next cap-subset
            let mut i = cap;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if picks[i] != i + members.len() - cap {
                    picks[i] += 1;
                    for j in i + 1..cap {
                        picks[j] = picks[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return false;
            }
        }
    }
    let mut t = 0usize;
    loop {
        let mut outdeg = alloc::vec![0usize; graph.vertices().len()];
        if feasible(graph, l, t, 0, &mut outdeg) {
            return t;
        }
        t += 1;
    }
}
