//! Graph files: JSON and a whitespace-separated edge list.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Graph, GraphError, NodeId, Role};

#[derive(Error, Debug)]
pub enum GraphIoError {
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error("bad role key {0:?}, expected a node id")]
    RoleKey(String),
    #[error("bad color key {0:?}, expected \"i,j\"")]
    ColorKey(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    nodes: Vec<NodeId>,
    edges: Vec<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    roles: BTreeMap<String, Role>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    colors: BTreeMap<String, usize>,
}

pub fn to_json(g: &Graph) -> String {
    let file = GraphFile {
        nodes: g.nodes().collect(),
        edges: g.edges().map(|(a, b)| [a, b]).collect(),
        roles: g.roles().iter().map(|(v, r)| (v.to_string(), *r)).collect(),
        colors: g
            .colors()
            .iter()
            .map(|((a, b), c)| (format!("{a},{b}"), *c))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("graph serializes")
}

pub fn from_json(text: &str) -> Result<Graph, GraphIoError> {
    let file: GraphFile = serde_json::from_str(text)?;
    let mut g = Graph::new();
    for v in file.nodes {
        g.add_node(v);
    }
    for [a, b] in file.edges {
        if !g.contains_node(a) || !g.contains_node(b) {
            return Err(GraphError::DanglingEdge(a, b).into());
        }
        g.add_edge(a, b)?;
    }
    for (k, r) in file.roles {
        let v: NodeId = k.parse().map_err(|_| GraphIoError::RoleKey(k.clone()))?;
        g.set_role(v, r);
    }
    for (k, c) in file.colors {
        let (a, b) = k
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
            .ok_or_else(|| GraphIoError::ColorKey(k.clone()))?;
        g.set_color(a, b, c)?;
    }
    Ok(g)
}

/// Parses lines of the form `i j [color]`; `#` starts a comment.
pub fn from_edge_list(text: &str) -> Result<Graph, GraphIoError> {
    let mut g = Graph::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| GraphIoError::EdgeList { line: n + 1, msg: msg.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(err("expected `i j [color]`"));
        }
        let a: NodeId = fields[0].parse().map_err(|_| err("bad node id"))?;
        let b: NodeId = fields[1].parse().map_err(|_| err("bad node id"))?;
        g.add_edge(a, b).map_err(|e| err(&e.to_string()))?;
        if let Some(c) = fields.get(2) {
            let c: usize = c.parse().map_err(|_| err("bad color"))?;
            g.set_color(a, b, c)?;
        }
    }
    Ok(g)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = String::new();
    for (a, b) in g.edges() {
        match g.color(a, b) {
            Some(c) => s.push_str(&format!("{a} {b} {c}\n")),
            None => s.push_str(&format!("{a} {b}\n")),
        }
    }
    s
}

/// Reads JSON when the text starts with `{`, an edge list otherwise.
pub fn parse_graph(text: &str) -> Result<Graph, GraphIoError> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_edge_list(text)
    }
}
