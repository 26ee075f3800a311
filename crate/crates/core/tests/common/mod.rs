//! Brute-force graph oracles shared by the integration tests and the
//! acceptance harness. Nothing here calls into the graph module beyond
//! building `Graph` values.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use lgr_core::graph::Graph;

/// Small graph on nodes `0..n` as an adjacency bitmask per node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Small {
    pub n: usize,
    pub adj: Vec<u32>,
}

impl Small {
    pub fn from_graph(g: &Graph) -> Small {
        let nodes: Vec<_> = g.nodes().collect();
        let idx: BTreeMap<_, _> = nodes.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut adj = vec![0u32; nodes.len()];
        for (a, b) in g.edges() {
            adj[idx[&a]] |= 1 << idx[&b];
            adj[idx[&b]] |= 1 << idx[&a];
        }
        Small { n: nodes.len(), adj }
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        for v in 0..self.n {
            g.add_node(v as u32);
        }
        for (a, b) in self.edges() {
            g.add_edge(a as u32, b as u32).unwrap();
        }
        g
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.adj[a] >> b & 1 == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0;
            for v in 0..self.n {
                if frontier >> v & 1 == 1 {
                    next |= self.adj[v];
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.n
    }

    /// Canonical code: the lexicographically largest upper-triangle bit
    /// string over all relabelings that list nodes by nonincreasing degree.
    pub fn canonical(&self) -> (usize, u64) {
        let n = self.n;
        assert!(n <= 11, "canonical codes are for small graphs");
        let deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut classes: Vec<usize> = deg.clone();
        classes.sort_unstable_by(|a, b| b.cmp(a));
        classes.dedup();
        let groups: Vec<Vec<usize>> =
            classes.iter().map(|&d| (0..n).filter(|&v| deg[v] == d).collect()).collect();
        let mut best = 0u64;
        let mut order = Vec::with_capacity(n);
        self.search(&groups, 0, &mut vec![false; n], &mut order, &mut best);
        (n, best)
    }

    fn search(&self, groups: &[Vec<usize>], gi: usize, used: &mut Vec<bool>, order: &mut Vec<usize>, best: &mut u64) {
        if order.len() == self.n {
            let mut code = 0u64;
            for a in 0..self.n {
                for b in a + 1..self.n {
                    code = code << 1 | u64::from(self.adj[order[a]] >> order[b] & 1);
                }
            }
            *best = (*best).max(code);
            return;
        }
        let group = &groups[gi];
        let placed_in_group = group.iter().filter(|&&v| used[v]).count();
        let next_gi = if placed_in_group + 1 == group.len() { gi + 1 } else { gi };
        for &v in group {
            if !used[v] {
                used[v] = true;
                order.push(v);
                self.search(groups, next_gi, used, order, best);
                order.pop();
                used[v] = false;
            }
        }
    }

    /// Line graph with nodes numbered by the sorted edge list.
    pub fn line_graph(&self) -> Small {
        let edges = self.edges();
        let m = edges.len();
        let mut adj = vec![0u32; m];
        for x in 0..m {
            for y in x + 1..m {
                let (a, b) = edges[x];
                let (c, d) = edges[y];
                if a == c || a == d || b == c || b == d {
                    adj[x] |= 1 << y;
                    adj[y] |= 1 << x;
                }
            }
        }
        Small { n: m, adj }
    }
}

/// Every connected graph on `n` nodes up to isomorphism, for `n <= 7`.
///
/// Built by adding one node joined to a nonempty subset of an `(n-1)`-node
/// connected graph: every connected graph has a node whose removal keeps it
/// connected, so nothing is missed.
pub fn connected_graphs(n: usize) -> Vec<Small> {
    assert!(n <= 7);
    if n == 0 {
        return vec![];
    }
    let mut level = vec![Small { n: 1, adj: vec![0] }];
    for k in 1..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 1u32..(1 << k) {
                let mut adj = g.adj.clone();
                adj.push(mask);
                for (v, a) in adj.iter_mut().enumerate().take(k) {
                    if mask >> v & 1 == 1 {
                        *a |= 1 << k;
                    }
                }
                let h = Small { n: k + 1, adj };
                if seen.insert(h.canonical()) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

/// Canonical codes of every connected line graph with at most `max_nodes`
/// nodes, found as `L(G)` over connected `G` with at most `max_nodes` edges.
pub fn line_graph_codes(max_nodes: usize) -> BTreeSet<(usize, u64)> {
    let mut out = BTreeSet::new();
    for n in 1..=max_nodes + 1 {
        for g in connected_graphs(n) {
            let m = g.edges().len();
            if (1..=max_nodes).contains(&m) {
                out.insert(g.line_graph().canonical());
            }
        }
    }
    out
}

/// Checks that node `v` of `gp` is the edge between its two cells and that
/// adjacency in `gp` is exactly "the two edges share a cell".
pub fn partition_realizes(gp: &Graph, cells_of: &BTreeMap<u32, Vec<u32>>) -> bool {
    let nodes: Vec<u32> = gp.nodes().collect();
    if nodes.iter().any(|v| cells_of.get(v).is_none_or(|c| c.len() != 2 || c[0] == c[1])) {
        return false;
    }
    let edge = |v: u32| {
        let c = &cells_of[&v];
        (c[0].min(c[1]), c[0].max(c[1]))
    };
    let mut distinct = HashSet::new();
    if !nodes.iter().all(|&v| distinct.insert(edge(v))) {
        return false;
    }
    for (x, &a) in nodes.iter().enumerate() {
        for &b in &nodes[x + 1..] {
            let (ea, eb) = (edge(a), edge(b));
            let share = ea.0 == eb.0 || ea.0 == eb.1 || ea.1 == eb.0 || ea.1 == eb.1;
            if share != gp.has_edge(a, b) {
                return false;
            }
        }
    }
    true
}
