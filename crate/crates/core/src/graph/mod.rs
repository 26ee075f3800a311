//! Undirected simple graphs with stable integer labels, plus the line-graph
//! and heavy-graph machinery used by the router.

mod coloring;
pub mod io;
mod line;
mod vf2;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coloring::{edge_coloring, is_perfect_matching, ColoringReport, NoPerfectMatching};
pub use line::{
    congruent_heavy_labels, heavy_graph, heavy_graph_unpruned, inverse_line_graph, line_graph,
    HeavyLabeling, KrauszPartition, LineGraph, MalformedPartition, NotALineGraph,
};
pub use vf2::{is_embedding, vf2_embed, NoEmbedding};

pub type NodeId = u32;

/// Role of a node in a heavy graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Heavy,
    Mediator,
    Plain,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge ({0}, {1}) references a node that is not in the graph")]
    DanglingEdge(NodeId, NodeId),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(NodeId, NodeId),
}

/// Sorted endpoint pair, used as the canonical key for an undirected edge.
#[inline]
pub fn edge_key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// An undirected simple graph.
///
/// Adjacency is kept in ordered containers so that every iteration order, and
/// therefore every derived result, is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
    roles: BTreeMap<NodeId, Role>,
    colors: BTreeMap<(NodeId, NodeId), usize>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on the given nodes and edges. Endpoints are added as nodes.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Graph::new();
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self, v: NodeId) {
        self.adj.entry(v).or_default();
    }

    /// Adds an edge and both endpoints. Duplicate edges are ignored.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> bool {
        let hit = self.adj.get_mut(&a).is_some_and(|s| s.remove(&b));
        if hit {
            self.adj.get_mut(&b).map(|s| s.remove(&a));
            self.colors.remove(&edge_key(a, b));
        }
        hit
    }

    pub fn remove_node(&mut self, v: NodeId) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for u in nbrs {
                if let Some(s) = self.adj.get_mut(&u) {
                    s.remove(&v);
                }
                self.colors.remove(&edge_key(u, v));
            }
        }
        self.roles.remove(&v);
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Nodes in ascending label order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    /// Edges as sorted pairs, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, s)| s.range(a + 1..).map(move |&b| (a, b)))
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn neighbor_set(&self, v: NodeId) -> Option<&BTreeSet<NodeId>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn role(&self, v: NodeId) -> Role {
        self.roles.get(&v).copied().unwrap_or(Role::Plain)
    }

    pub fn set_role(&mut self, v: NodeId, role: Role) {
        if role == Role::Plain {
            self.roles.remove(&v);
        } else {
            self.roles.insert(v, role);
        }
    }

    pub fn roles(&self) -> &BTreeMap<NodeId, Role> {
        &self.roles
    }

    pub fn nodes_with_role(&self, role: Role) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.role(v) == role).collect()
    }

    pub fn color(&self, a: NodeId, b: NodeId) -> Option<usize> {
        self.colors.get(&edge_key(a, b)).copied()
    }

    pub fn set_color(&mut self, a: NodeId, b: NodeId, c: usize) -> Result<(), GraphError> {
        if !self.has_edge(a, b) {
            return Err(GraphError::NotAnEdge(a, b));
        }
        self.colors.insert(edge_key(a, b), c);
        Ok(())
    }

    pub fn colors(&self) -> &BTreeMap<(NodeId, NodeId), usize> {
        &self.colors
    }

    pub fn clear_colors(&mut self) {
        self.colors.clear();
    }

    /// Number of distinct colors in use.
    pub fn color_count(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    /// Edges of the given color, in sorted order.
    pub fn edges_of_color(&self, c: usize) -> Vec<(NodeId, NodeId)> {
        self.colors
            .iter()
            .filter(|(_, &k)| k == c)
            .map(|(&e, _)| e)
            .collect()
    }

    /// True when every edge is colored and no two edges sharing a node agree.
    pub fn is_properly_colored(&self) -> bool {
        for v in self.nodes() {
            let mut seen = BTreeSet::new();
            for u in self.neighbors(v) {
                match self.color(u, v) {
                    Some(c) if seen.insert(c) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for s in self.nodes() {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if seen.insert(u) {
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Subgraph induced by `keep`, retaining roles and colors.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> Graph {
        let mut g = Graph::new();
        for &v in keep {
            if self.contains_node(v) {
                g.add_node(v);
                if self.role(v) != Role::Plain {
                    g.set_role(v, self.role(v));
                }
            }
        }
        for (a, b) in self.edges() {
            if keep.contains(&a) && keep.contains(&b) {
                g.adj.get_mut(&a).unwrap().insert(b);
                g.adj.get_mut(&b).unwrap().insert(a);
                if let Some(c) = self.color(a, b) {
                    g.colors.insert((a, b), c);
                }
            }
        }
        g
    }

    /// Applies a node relabeling. Nodes missing from `map` keep their label.
    pub fn relabel(&self, map: &BTreeMap<NodeId, NodeId>) -> Graph {
        let f = |v: NodeId| map.get(&v).copied().unwrap_or(v);
        let mut g = Graph::new();
        for v in self.nodes() {
            g.add_node(f(v));
        }
        for (a, b) in self.edges() {
            g.adj.get_mut(&f(a)).unwrap().insert(f(b));
            g.adj.get_mut(&f(b)).unwrap().insert(f(a));
        }
        for (&v, &r) in &self.roles {
            g.roles.insert(f(v), r);
        }
        for (&(a, b), &c) in &self.colors {
            g.colors.insert(edge_key(f(a), f(b)), c);
        }
        g
    }

    /// Relabels nodes to `0..n` in ascending order of their current labels.
    /// Returns the new graph and the map from new label to old label.
    pub fn densify(&self) -> (Graph, Vec<NodeId>) {
        let old: Vec<NodeId> = self.nodes().collect();
        let map = old
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as NodeId))
            .collect();
        (self.relabel(&map), old)
    }

    /// Structural check used by tests and I/O: no self-loops and symmetric
    /// adjacency. Always true for graphs built through the public API.
    pub fn is_well_formed(&self) -> bool {
        self.adj.iter().all(|(&a, s)| {
            !s.contains(&a)
                && s.iter()
                    .all(|b| self.adj.get(b).is_some_and(|t| t.contains(&a)))
        })
    }
}

/// Path graph on `n` nodes labeled `0..n`.
pub fn path_graph(n: usize) -> Graph {
    let mut g = Graph::new();
    for v in 0..n as NodeId {
        g.add_node(v);
        if v > 0 {
            g.add_edge(v - 1, v).unwrap();
        }
    }
    g
}

/// Cycle on `n >= 3` nodes labeled `0..n`.
pub fn cycle_graph(n: usize) -> Graph {
    let mut g = path_graph(n);
    if n >= 3 {
        g.add_edge(0, n as NodeId - 1).unwrap();
    }
    g
}

/// Complete graph K_n on labels `0..n`.
pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::new();
    for a in 0..n as NodeId {
        g.add_node(a);
        for b in 0..a {
            g.add_edge(b, a).unwrap();
        }
    }
    g
}

/// Star K_{1,n}: center 0 with leaves `1..=n`.
pub fn star_graph(n: usize) -> Graph {
    let mut g = Graph::new();
    g.add_node(0);
    for v in 1..=n as NodeId {
        g.add_edge(0, v).unwrap();
    }
    g
}
