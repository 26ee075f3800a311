//! VF2-style backtracking search for a subgraph monomorphism.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Graph, NodeId};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("pattern graph has no embedding in the host graph")]
pub struct NoEmbedding;

/// Finds an injective map realizing `pattern` as a (not necessarily induced)
/// subgraph of `host`.
///
/// The next pattern node is the smallest label adjacent to the mapped set, or
/// the smallest unmapped label when the frontier is empty. Host candidates
/// are tried in ascending label order, so the result is deterministic.
pub fn vf2_embed(pattern: &Graph, host: &Graph) -> Result<BTreeMap<NodeId, NodeId>, NoEmbedding> {
    if pattern.node_count() > host.node_count() || pattern.edge_count() > host.edge_count() {
        return Err(NoEmbedding);
    }
    let mut s = Search {
        pattern,
        host,
        host_nodes: host.nodes().collect(),
        map: BTreeMap::new(),
        used: BTreeSet::new(),
    };
    if s.extend() {
        Ok(s.map)
    } else {
        Err(NoEmbedding)
    }
}

struct Search<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    host_nodes: Vec<NodeId>,
    map: BTreeMap<NodeId, NodeId>,
    used: BTreeSet<NodeId>,
}

impl Search<'_> {
    fn next_node(&self) -> Option<NodeId> {
        let frontier = self
            .map
            .keys()
            .flat_map(|&v| self.pattern.neighbors(v))
            .filter(|u| !self.map.contains_key(u))
            .min();
        frontier.or_else(|| self.pattern.nodes().find(|v| !self.map.contains_key(v)))
    }

    fn feasible(&self, p: NodeId, h: NodeId) -> bool {
        if self.used.contains(&h) || self.host.degree(h) < self.pattern.degree(p) {
            return false;
        }
        let mut open_p = 0;
        for u in self.pattern.neighbors(p) {
            match self.map.get(&u) {
                Some(&hu) => {
                    if !self.host.has_edge(h, hu) {
                        return false;
                    }
                }
                None => open_p += 1,
            }
        }
        let open_h = self
            .host
            .neighbors(h)
            .filter(|u| !self.used.contains(u))
            .count();
        open_p <= open_h
    }

    fn extend(&mut self) -> bool {
        let Some(p) = self.next_node() else {
            return true;
        };
        // Candidates adjacent to the image of a mapped neighbor, if any.
        let anchor = self.pattern.neighbors(p).find_map(|u| self.map.get(&u).copied());
        let candidates: Vec<NodeId> = match anchor {
            Some(a) => self.host.neighbors(a).collect(),
            None => self.host_nodes.clone(),
        };
        for h in candidates {
            if self.feasible(p, h) {
                self.map.insert(p, h);
                self.used.insert(h);
                if self.extend() {
                    return true;
                }
                self.map.remove(&p);
                self.used.remove(&h);
            }
        }
        false
    }
}

/// True when `map` is injective and sends every pattern edge to a host edge.
pub fn is_embedding(pattern: &Graph, host: &Graph, map: &BTreeMap<NodeId, NodeId>) -> bool {
    let images: BTreeSet<_> = map.values().collect();
    images.len() == map.len()
        && pattern.nodes().all(|v| map.get(&v).is_some_and(|&h| host.contains_node(h)))
        && pattern
            .edges()
            .all(|(a, b)| host.has_edge(map[&a], map[&b]))
}
