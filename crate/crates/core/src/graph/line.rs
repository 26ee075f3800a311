//! Line graphs, heavy graphs, and line-graph recognition through a Krausz
//! partition.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::{edge_key, Graph, NodeId, Role};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("coupling graph is not a line graph")]
pub struct NotALineGraph;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("malformed Krausz partition: cells {0} and {1} share {2} nodes")]
pub struct MalformedPartition(pub NodeId, pub NodeId, pub usize);

/// `L(g)` together with the edge of `g` behind every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineGraph {
    pub graph: Graph,
    /// `edge_of[k]` is the edge of the source graph represented by node `k`.
    pub edge_of: Vec<(NodeId, NodeId)>,
}

/// Line graph of `g`. Node `k` stands for the `k`-th edge of `g` in sorted
/// order; two nodes are adjacent iff their edges share an endpoint.
pub fn line_graph(g: &Graph) -> LineGraph {
    let edge_of: Vec<_> = g.edges().collect();
    let index: HashMap<(NodeId, NodeId), NodeId> = edge_of
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, k as NodeId))
        .collect();
    let mut lg = Graph::new();
    for k in 0..edge_of.len() as NodeId {
        lg.add_node(k);
    }
    for v in g.nodes() {
        let incident: Vec<NodeId> = g.neighbors(v).map(|u| index[&edge_key(u, v)]).collect();
        for (x, &a) in incident.iter().enumerate() {
            for &b in &incident[x + 1..] {
                lg.add_edge(a, b).expect("distinct edges");
            }
        }
    }
    LineGraph { graph: lg, edge_of }
}

/// A heavy graph with the mediator responsible for every pair of adjacent
/// heavy nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyLabeling {
    pub heavy_graph: Graph,
    /// Keyed by the sorted heavy-node pair.
    pub mediator_of: BTreeMap<(NodeId, NodeId), NodeId>,
}

impl HeavyLabeling {
    pub fn mediator(&self, i: NodeId, j: NodeId) -> Option<NodeId> {
        self.mediator_of.get(&edge_key(i, j)).copied()
    }

    pub fn heavy_nodes(&self) -> Vec<NodeId> {
        self.heavy_graph.nodes_with_role(Role::Heavy)
    }

    pub fn mediators(&self) -> Vec<NodeId> {
        self.heavy_graph.nodes_with_role(Role::Mediator)
    }
}

/// `heavy(g)` with degree-one mediators pruned.
///
/// Heavy node `k` sits on the `k`-th sorted edge of `g`, so heavy labels agree
/// with the labels of [`line_graph`]. The mediator for node `v` of `g` gets
/// label `|E(g)| + rank(v)`.
pub fn heavy_graph(g: &Graph) -> HeavyLabeling {
    let mut h = heavy_graph_unpruned(g);
    let doomed: Vec<NodeId> = h
        .heavy_graph
        .nodes()
        .filter(|&v| h.heavy_graph.role(v) == Role::Mediator && h.heavy_graph.degree(v) <= 1)
        .collect();
    for v in doomed {
        h.heavy_graph.remove_node(v);
    }
    h
}

/// `heavy(g)` without pruning: `|V(g)| + |E(g)|` nodes.
pub fn heavy_graph_unpruned(g: &Graph) -> HeavyLabeling {
    let edges: Vec<_> = g.edges().collect();
    let base = edges.len() as NodeId;
    let rank: BTreeMap<NodeId, NodeId> = g
        .nodes()
        .enumerate()
        .map(|(r, v)| (v, base + r as NodeId))
        .collect();
    let mut h = Graph::new();
    for &m in rank.values() {
        h.add_node(m);
        h.set_role(m, Role::Mediator);
    }
    let mut index = HashMap::new();
    for (k, &(a, b)) in edges.iter().enumerate() {
        let k = k as NodeId;
        index.insert((a, b), k);
        h.add_edge(rank[&a], k).unwrap();
        h.add_edge(k, rank[&b]).unwrap();
        h.set_role(k, Role::Heavy);
    }
    let mut mediator_of = BTreeMap::new();
    for v in g.nodes() {
        let incident: Vec<NodeId> = g.neighbors(v).map(|u| index[&edge_key(u, v)]).collect();
        for (x, &a) in incident.iter().enumerate() {
            for &b in &incident[x + 1..] {
                mediator_of.insert(edge_key(a, b), rank[&v]);
            }
        }
    }
    HeavyLabeling { heavy_graph: h, mediator_of }
}

/// Edge partition of a line graph into cliques such that every node lies in
/// exactly two cells once singleton cells are counted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KrauszPartition {
    /// Cliques with at least two nodes, sorted.
    pub cliques: Vec<BTreeSet<NodeId>>,
    /// Nodes that lie in only one clique get a singleton cell. An isolated
    /// node gets two.
    pub singleton_cells: Vec<NodeId>,
}

impl KrauszPartition {
    pub fn cell_count(&self) -> usize {
        self.cliques.len() + self.singleton_cells.len()
    }

    /// Members of cell `c`, where cliques come first and singletons after, as
    /// in the node labels of the preimage graph.
    pub fn cell(&self, c: NodeId) -> BTreeSet<NodeId> {
        let c = c as usize;
        if c < self.cliques.len() {
            self.cliques[c].clone()
        } else {
            BTreeSet::from([self.singleton_cells[c - self.cliques.len()]])
        }
    }

    /// For every partitioned node, the two cells containing it.
    pub fn cells_of(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut out: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for (c, clique) in self.cliques.iter().enumerate() {
            for &v in clique {
                out.entry(v).or_default().push(c as NodeId);
            }
        }
        let off = self.cliques.len();
        for (k, &v) in self.singleton_cells.iter().enumerate() {
            out.entry(v).or_default().push((off + k) as NodeId);
        }
        out
    }

    /// Checks the partition against `gp`: every edge in exactly one clique,
    /// every clique complete, every node in exactly two cells.
    pub fn is_valid_for(&self, gp: &Graph) -> bool {
        let mut covered = HashSet::new();
        for clique in &self.cliques {
            let members: Vec<_> = clique.iter().copied().collect();
            if members.len() < 2 {
                return false;
            }
            for (x, &a) in members.iter().enumerate() {
                for &b in &members[x + 1..] {
                    if !gp.has_edge(a, b) || !covered.insert((a, b)) {
                        return false;
                    }
                }
            }
        }
        if covered.len() != gp.edge_count() {
            return false;
        }
        let cells = self.cells_of();
        gp.nodes().all(|v| cells.get(&v).is_some_and(|c| c.len() == 2))
            && cells.keys().all(|&v| gp.contains_node(v))
    }
}

/// Recovers `G` with `L(G) = gp` from a Krausz partition of `gp`.
///
/// The nodes of the returned graph are the partition cells (cliques first,
/// then singleton cells), and node `v` of `gp` becomes the edge between its
/// two cells. A triangle component is returned as the star `K_{1,3}`.
pub fn inverse_line_graph(gp: &Graph) -> Result<(Graph, KrauszPartition), NotALineGraph> {
    let mut cliques = Vec::new();
    let mut singles = Vec::new();
    for comp in gp.connected_components() {
        let (cl, si) = partition_component(gp, &comp).ok_or(NotALineGraph)?;
        cliques.extend(cl);
        singles.extend(si);
    }
    cliques.sort();
    singles.sort();
    let part = KrauszPartition { cliques, singleton_cells: singles };
    let mut g = Graph::new();
    for c in 0..part.cell_count() as NodeId {
        g.add_node(c);
    }
    for (_, cells) in part.cells_of() {
        // Two cells never share two nodes, so this never creates a multi-edge.
        g.add_edge(cells[0], cells[1]).map_err(|_| NotALineGraph)?;
    }
    Ok((g, part))
}

type Cells = (Vec<BTreeSet<NodeId>>, Vec<NodeId>);

fn partition_component(gp: &Graph, comp: &[NodeId]) -> Option<Cells> {
    if comp.len() == 1 {
        return Some((Vec::new(), vec![comp[0], comp[0]]));
    }
    let v0 = *comp
        .iter()
        .min_by_key(|&&v| (gp.degree(v), v))
        .expect("nonempty component");
    let nbrs: Vec<NodeId> = gp.neighbors(v0).collect();
    for first in initial_splits(gp, &nbrs) {
        if let Some(cells) = propagate(gp, comp, v0, &first, &nbrs) {
            return Some(cells);
        }
    }
    None
}

/// Candidate sets for the part of `N(v0)` sharing v0's first cell. The second
/// cell receives the rest. Up to symmetry the first neighbor always goes to
/// the first cell, and the full neighborhood is tried first.
fn initial_splits(gp: &Graph, nbrs: &[NodeId]) -> Vec<BTreeSet<NodeId>> {
    let d = nbrs.len();
    let is_clique = |s: &[NodeId]| {
        s.iter()
            .enumerate()
            .all(|(x, &a)| s[x + 1..].iter().all(|&b| gp.has_edge(a, b)))
    };
    let mut out = Vec::new();
    if d <= 16 {
        let rest_bits = d - 1;
        for m in (0..1u32 << rest_bits).rev() {
            let (mut a, mut b) = (vec![nbrs[0]], Vec::new());
            for (k, &v) in nbrs[1..].iter().enumerate() {
                if m >> k & 1 == 1 {
                    a.push(v);
                } else {
                    b.push(v);
                }
            }
            if is_clique(&a) && is_clique(&b) {
                out.push(a.into_iter().collect());
            }
        }
    } else {
        // Large neighborhoods: a valid split two-colors the complement of
        // N(v0). Nodes adjacent to all of N(v0) are placed in the first cell.
        let all: BTreeSet<NodeId> = nbrs.iter().copied().collect();
        if is_clique(nbrs) {
            out.push(all.clone());
        }
        let mut side: BTreeMap<NodeId, bool> = BTreeMap::new();
        for &s in nbrs {
            if side.contains_key(&s) {
                continue;
            }
            side.insert(s, true);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in nbrs {
                    if u != v && !gp.has_edge(u, v) {
                        match side.get(&u) {
                            Some(&su) if su == side[&v] => return out,
                            Some(_) => {}
                            None => {
                                side.insert(u, !side[&v]);
                                stack.push(u);
                            }
                        }
                    }
                }
            }
        }
        let a: Vec<NodeId> = nbrs.iter().copied().filter(|v| side[v]).collect();
        let b: Vec<NodeId> = nbrs.iter().copied().filter(|v| !side[v]).collect();
        if is_clique(&a) && is_clique(&b) && a.len() < d {
            out.push(a.into_iter().collect());
        }
    }
    out
}

struct PartitionState<'a> {
    gp: &'a Graph,
    covered: HashSet<(NodeId, NodeId)>,
    ncells: HashMap<NodeId, u8>,
    cliques: Vec<BTreeSet<NodeId>>,
    singles: Vec<NodeId>,
    queue: Vec<NodeId>,
}

impl PartitionState<'_> {
    fn add_clique(&mut self, members: BTreeSet<NodeId>) -> bool {
        let list: Vec<NodeId> = members.iter().copied().collect();
        for (x, &a) in list.iter().enumerate() {
            if *self.ncells.get(&a).unwrap_or(&0) >= 2 {
                return false;
            }
            for &b in &list[x + 1..] {
                if !self.gp.has_edge(a, b) || !self.covered.insert((a, b)) {
                    return false;
                }
            }
        }
        for &a in &list {
            *self.ncells.entry(a).or_insert(0) += 1;
            self.queue.push(a);
        }
        self.cliques.push(members);
        true
    }

    fn add_single(&mut self, v: NodeId) -> bool {
        let n = self.ncells.entry(v).or_insert(0);
        if *n >= 2 {
            return false;
        }
        *n += 1;
        self.singles.push(v);
        true
    }

    fn uncovered(&self, x: NodeId) -> BTreeSet<NodeId> {
        self.gp
            .neighbors(x)
            .filter(|&u| !self.covered.contains(&edge_key(u, x)))
            .collect()
    }
}

fn propagate(
    gp: &Graph,
    comp: &[NodeId],
    v0: NodeId,
    first: &BTreeSet<NodeId>,
    nbrs: &[NodeId],
) -> Option<Cells> {
    let mut st = PartitionState {
        gp,
        covered: HashSet::new(),
        ncells: HashMap::new(),
        cliques: Vec::new(),
        singles: Vec::new(),
        queue: Vec::new(),
    };
    let mut a = first.clone();
    a.insert(v0);
    if !st.add_clique(a) {
        return None;
    }
    let rest: BTreeSet<NodeId> = nbrs.iter().copied().filter(|v| !first.contains(v)).collect();
    if rest.is_empty() {
        st.add_single(v0);
    } else {
        let mut b = rest;
        b.insert(v0);
        if !st.add_clique(b) {
            return None;
        }
    }
    while let Some(x) = st.queue.pop() {
        let open = st.uncovered(x);
        match st.ncells[&x] {
            2 => {
                if !open.is_empty() {
                    return None;
                }
            }
            1 => {
                if open.is_empty() {
                    st.add_single(x);
                } else {
                    let mut cell = open;
                    cell.insert(x);
                    if !st.add_clique(cell) {
                        return None;
                    }
                }
            }
            _ => unreachable!("queued nodes belong to at least one cell"),
        }
    }
    let complete = comp.iter().all(|v| st.ncells.get(v) == Some(&2));
    let edges_in_comp: usize = comp.iter().map(|&v| gp.degree(v)).sum::<usize>() / 2;
    (complete && st.covered.len() == edges_in_comp).then_some((st.cliques, st.singles))
}

/// Heavy graph whose heavy labels are exactly the nodes of `gp`.
///
/// `g` must be the preimage returned alongside `partition`. For an edge
/// `(a, b)` of `g` the shared node `c = a ∩ b` becomes a heavy node joined to
/// mediators `a` and `b`; a singleton cell is identified with its node, which
/// prunes degree-one mediators. Mediator labels are
/// `max(gp label) + 1 + clique index`.
pub fn congruent_heavy_labels(
    g: &Graph,
    partition: &KrauszPartition,
) -> Result<HeavyLabeling, MalformedPartition> {
    let ncl = partition.cliques.len() as NodeId;
    let base = partition
        .cliques
        .iter()
        .flat_map(|c| c.iter())
        .chain(partition.singleton_cells.iter())
        .max()
        .map_or(0, |&m| m + 1);
    let mut h = Graph::new();
    for (a, b) in g.edges() {
        let (ca, cb) = (partition.cell(a), partition.cell(b));
        let shared: Vec<NodeId> = ca.intersection(&cb).copied().collect();
        if shared.len() != 1 {
            return Err(MalformedPartition(a, b, shared.len()));
        }
        let c = shared[0];
        h.add_node(c);
        h.set_role(c, Role::Heavy);
        for cell in [a, b] {
            if cell < ncl {
                let m = base + cell;
                h.add_edge(m, c).unwrap();
                h.set_role(m, Role::Mediator);
            }
        }
    }
    let mut mediator_of = BTreeMap::new();
    for (k, clique) in partition.cliques.iter().enumerate() {
        let members: Vec<NodeId> = clique.iter().copied().collect();
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                mediator_of.insert((i, j), base + k as NodeId);
            }
        }
    }
    Ok(HeavyLabeling { heavy_graph: h, mediator_of })
}
