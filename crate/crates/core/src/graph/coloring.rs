//! Edge coloring whose color 0 is a perfect matching.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Graph, NodeId};

/// Metadata about a computed coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColoringReport {
    pub colors: usize,
    pub max_degree: usize,
    /// Color 0 covers every node.
    pub perfect_matching: bool,
    /// The number of colors equals the maximum degree.
    pub minimal: bool,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("no perfect matching found ({unmatched} nodes left unmatched)")]
pub struct NoPerfectMatching {
    pub unmatched: usize,
    /// Best-effort coloring with a maximum-found matching as color 0.
    pub partial: Graph,
}

/// Proper edge coloring of `g`.
///
/// Color 0 is a matching grown greedily over sorted edges and then enlarged
/// with alternating-path augmentation (no blossom shrinking, so a perfect
/// matching can be missed on non-bipartite graphs). The remaining edges are
/// colored greedily in sorted order with the smallest color not yet present
/// at either endpoint.
pub fn edge_coloring(g: &Graph) -> Result<(Graph, ColoringReport), NoPerfectMatching> {
    let mate = maximum_matching(g);
    let mut out = g.clone();
    out.clear_colors();
    let mut used: BTreeMap<NodeId, BTreeSet<usize>> = BTreeMap::new();
    for (&a, &b) in &mate {
        if a < b {
            out.set_color(a, b, 0).expect("matched pair is an edge");
            used.entry(a).or_default().insert(0);
            used.entry(b).or_default().insert(0);
        }
    }
    for (a, b) in g.edges() {
        if mate.get(&a) == Some(&b) {
            continue;
        }
        let (ua, ub) = (used.entry(a).or_default().clone(), used.entry(b).or_default().clone());
        let c = (1..).find(|c| !ua.contains(c) && !ub.contains(c)).unwrap();
        out.set_color(a, b, c).unwrap();
        used.get_mut(&a).unwrap().insert(c);
        used.get_mut(&b).unwrap().insert(c);
    }
    let unmatched = g.nodes().filter(|v| !mate.contains_key(v)).count();
    let colors = out.color_count();
    let max_degree = g.max_degree();
    let report = ColoringReport {
        colors,
        max_degree,
        perfect_matching: unmatched == 0,
        minimal: colors == max_degree,
    };
    if unmatched == 0 {
        Ok((out, report))
    } else {
        Err(NoPerfectMatching { unmatched, partial: out })
    }
}

/// Matching as a symmetric partner map: greedy over sorted edges, then
/// augmentation along alternating paths found by depth-first search from
/// each free node in ascending order.
pub(crate) fn maximum_matching(g: &Graph) -> BTreeMap<NodeId, NodeId> {
    let mut mate: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (a, b) in g.edges() {
        if !mate.contains_key(&a) && !mate.contains_key(&b) {
            mate.insert(a, b);
            mate.insert(b, a);
        }
    }
    loop {
        let mut improved = false;
        for r in g.nodes().collect::<Vec<_>>() {
            if mate.contains_key(&r) {
                continue;
            }
            let mut seen = BTreeSet::from([r]);
            if let Some(path) = augmenting_path(g, &mate, r, &mut seen) {
                for pair in path.chunks(2) {
                    mate.insert(pair[0], pair[1]);
                    mate.insert(pair[1], pair[0]);
                }
                improved = true;
            }
        }
        if !improved {
            return mate;
        }
    }
}

/// Alternating path from free node `v` to another free node, returned as the
/// list of nodes whose consecutive pairs become matched.
fn augmenting_path(
    g: &Graph,
    mate: &BTreeMap<NodeId, NodeId>,
    v: NodeId,
    seen: &mut BTreeSet<NodeId>,
) -> Option<Vec<NodeId>> {
    for u in g.neighbors(v) {
        if !seen.insert(u) {
            continue;
        }
        match mate.get(&u) {
            None => return Some(vec![v, u]),
            Some(&w) => {
                if !seen.insert(w) {
                    continue;
                }
                if let Some(mut rest) = augmenting_path(g, mate, w, seen) {
                    let mut path = vec![v, u];
                    path.append(&mut rest);
                    return Some(path);
                }
            }
        }
    }
    None
}

/// True when `pairs` is a matching of `g` covering every node.
pub fn is_perfect_matching(g: &Graph, pairs: &[(NodeId, NodeId)]) -> bool {
    let mut hit = BTreeSet::new();
    pairs
        .iter()
        .all(|&(a, b)| g.has_edge(a, b) && hit.insert(a) && hit.insert(b))
        && hit.len() == g.node_count()
}
