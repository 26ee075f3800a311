//! Line-graph routing: every two-qubit gate `U(i,j)` of a circuit whose
//! coupling graph is `L(G)` becomes `SWAP(m,x) U SWAP(x,m)` on `heavy(G)`,
//! where `m` is the mediator of `i` and `j` and `x` is one of them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{coupling_graph, depth, Circuit, Gate, GateKind, Qubit};
use crate::graph::io as graph_io;
use crate::graph::{
    congruent_heavy_labels, edge_key, inverse_line_graph, Graph, HeavyLabeling, NodeId,
    NotALineGraph, Role,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RouteError {
    #[error(transparent)]
    NotALineGraph(#[from] NotALineGraph),
    #[error("gate acts on {0} qubits; only one- and two-qubit gates can be routed")]
    GateArity(usize),
    #[error("mediator side selection {0:?} is not implemented")]
    UnsupportedSide(MediatorSide),
    #[error("target graph has {target} nodes but the circuit uses {needed} qubits")]
    TargetTooSmall { target: usize, needed: usize },
    #[error("target graph is not connected")]
    TargetDisconnected,
    #[error("initial layout is not an injective map of the circuit's qubits onto target nodes")]
    BadLayout,
    #[error("gate on qubits {0:?} does not lie on the coupling graph")]
    OffCouplingGraph(Vec<Qubit>),
}

#[derive(Error, Debug)]
pub enum ResultJsonError {
    #[error("invalid routing result JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("routing result JSON lacks `{0}`")]
    Missing(&'static str),
    #[error("layout key {0:?} is not a node id")]
    BadKey(String),
    #[error(transparent)]
    Circuit(#[from] crate::circuit::CircuitError),
    #[error("hardware graph: {0}")]
    Hardware(String),
}

/// Which operand of a two-qubit gate is swapped into the mediator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MediatorSide {
    /// The first-listed qubit: `SWAP(m,i) U(m,j) SWAP(i,m)`.
    #[default]
    First,
    /// The second-listed qubit: `SWAP(m,j) U(i,m) SWAP(j,m)`.
    Second,
    /// Choose the side that maximizes later cancellation. Declared only.
    LookAhead,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RouteOptions {
    pub side: MediatorSide,
    /// Remove mediators next to lone leaves.
    pub lone_leaf: bool,
    /// Fold leading and trailing SWAPs into the layout and final permutation.
    pub elide_boundary: bool,
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions { side: MediatorSide::First, lone_leaf: true, elide_boundary: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricsRecord {
    pub depth: usize,
    pub n_swap: usize,
    pub n_qubit: usize,
    pub wall_time_s: f64,
    /// Two-qubit gates in the input circuit.
    pub lambda: usize,
    /// All gates in the input circuit.
    pub total_gates: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutingResult {
    pub circuit: Circuit,
    /// Logical qubit to the hardware node holding it at the start.
    pub initial_layout: BTreeMap<Qubit, NodeId>,
    /// Node where the content starting on each hardware node ends up, fixed
    /// when routing finishes. Only boundary elision makes it non-trivial;
    /// nodes absent from the map end where they start.
    pub final_permutation: BTreeMap<NodeId, NodeId>,
    /// Hardware graph with heavy and mediator roles; the routed circuit only
    /// acts along its edges.
    pub hardware: Graph,
    pub metrics: MetricsRecord,
}

impl RoutingResult {
    /// Logical qubit to the hardware node holding it at the end of the
    /// routed circuit, as claimed by `initial_layout` and
    /// `final_permutation`.
    pub fn final_layout(&self) -> BTreeMap<Qubit, NodeId> {
        self.initial_layout
            .iter()
            .map(|(&q, &v)| (q, self.final_permutation.get(&v).copied().unwrap_or(v)))
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let map = |m: &BTreeMap<NodeId, NodeId>| {
            m.iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::from(*v)))
                .collect::<serde_json::Map<_, _>>()
        };
        serde_json::json!({
            "circuit": self.circuit.to_json_value(),
            "initial_layout": map(&self.initial_layout),
            "final_permutation": map(&self.final_permutation),
            "metrics": self.metrics,
            "hardware": serde_json::from_str::<serde_json::Value>(&graph_io::to_json(&self.hardware))
                .expect("graph JSON is valid"),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("routing result serializes")
    }

    /// Reads the format written by [`RoutingResult::to_json`]. `hardware` and
    /// `metrics` may be missing.
    pub fn from_json(text: &str) -> Result<RoutingResult, ResultJsonError> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let circuit = Circuit::from_json_value(v.get("circuit").cloned().ok_or(ResultJsonError::Missing("circuit"))?)?;
        let map = |key: &'static str| -> Result<BTreeMap<NodeId, NodeId>, ResultJsonError> {
            let Some(obj) = v.get(key) else { return Ok(BTreeMap::new()) };
            let raw: BTreeMap<String, NodeId> = serde_json::from_value(obj.clone())?;
            raw.into_iter()
                .map(|(k, x)| k.parse().map(|k| (k, x)).map_err(|_| ResultJsonError::BadKey(k)))
                .collect()
        };
        let initial_layout = map("initial_layout")?;
        let final_permutation = map("final_permutation")?;
        let hardware = match v.get("hardware") {
            Some(h) => graph_io::from_json(&h.to_string()).map_err(|e| ResultJsonError::Hardware(e.to_string()))?,
            None => Graph::new(),
        };
        let metrics = match v.get("metrics") {
            Some(m) => serde_json::from_value(m.clone())?,
            None => MetricsRecord::default(),
        };
        Ok(RoutingResult { circuit, initial_layout, final_permutation, hardware, metrics })
    }
}

/// Routes `c` onto `heavy(G)` where `L(G)` is its coupling graph.
///
/// Pipeline: coupling graph, Krausz partition, congruent heavy labels,
/// mediated rewrite, SWAP cancellation, lone-leaf removal, optional boundary
/// elision, metrics. With lone-leaf removal on, a gate touching a lone leaf
/// always swaps the leaf into the mediator, whatever `side` says.
pub fn line_graph_route(c: &Circuit, opts: RouteOptions) -> Result<RoutingResult, RouteError> {
    route_on(c, coupling_graph(c), opts, Instant::now())
}

/// Routes `c` onto `heavy(G)` where `L(G)` is `coupling`, which must contain
/// every qubit and every two-qubit gate of `c`.
///
/// A sparse random circuit on a lattice rarely couples a line graph by
/// itself; routing it against the whole lattice uses the lattice's heavy
/// graph instead. Every node of `coupling` gets an identity layout entry.
pub fn line_graph_route_on(c: &Circuit, coupling: &Graph, opts: RouteOptions) -> Result<RoutingResult, RouteError> {
    let start = Instant::now();
    for g in c.gates() {
        let on = match *g.qubits() {
            [a] => coupling.contains_node(a),
            [a, b] => coupling.has_edge(a, b),
            _ => return Err(RouteError::GateArity(g.qubits().len())),
        };
        if !on {
            return Err(RouteError::OffCouplingGraph(g.qubits().to_vec()));
        }
    }
    route_on(c, coupling.clone(), opts, start)
}

fn route_on(c: &Circuit, cg: Graph, opts: RouteOptions, start: Instant) -> Result<RoutingResult, RouteError> {
    if opts.side == MediatorSide::LookAhead {
        return Err(RouteError::UnsupportedSide(opts.side));
    }
    let (g, partition) = inverse_line_graph(&cg)?;
    let labeling = congruent_heavy_labels(&g, &partition)
        .expect("partitions produced by recognition are well formed");
    let leaves = if opts.lone_leaf { lone_leaves(&labeling.heavy_graph) } else { BTreeMap::new() };
    let identity: BTreeMap<Qubit, NodeId> = cg.nodes().map(|q| (q, q)).collect();
    let route_with = |leaves: &BTreeMap<NodeId, NodeId>| -> Result<RoutingResult, RouteError> {
        let mediated = mediated_rewrite(c, &labeling, opts.side, leaves)?;
        Ok(RoutingResult {
            circuit: cancel_swaps(&mediated),
            initial_layout: identity.clone(),
            final_permutation: BTreeMap::new(),
            hardware: labeling.heavy_graph.clone(),
            metrics: MetricsRecord::default(),
        })
    };
    let plain = route_with(&BTreeMap::new())?;
    let mut result = if leaves.is_empty() {
        plain
    } else {
        // Forcing the leaf side can cost cancellations elsewhere; fall back
        // to the guarded pass when it would add SWAPs or qubits.
        let forced = apply_lone_leaves(route_with(&leaves)?, &leaves);
        let cost = |r: &RoutingResult| (r.circuit.count(GateKind::Swap), r.circuit.active_qubits().len());
        let (fc, pc) = (cost(&forced), cost(&plain));
        if fc.0 <= pc.0 && fc.1 <= pc.1 {
            forced
        } else {
            remove_lone_leaves(plain)
        }
    };
    if opts.elide_boundary {
        result = elide_boundary_swaps(result);
    }
    result.metrics = route_metrics(c, &result.circuit, start.elapsed().as_secs_f64());
    Ok(result)
}

/// Lone leaves of a heavy graph, keyed by mediator: heavy nodes of degree
/// one whose mediator has no other degree-one neighbor.
pub fn lone_leaves(h: &Graph) -> BTreeMap<NodeId, NodeId> {
    let mut out = BTreeMap::new();
    for m in h.nodes().filter(|&v| h.role(v) == Role::Mediator) {
        let leaves: Vec<NodeId> = h
            .neighbors(m)
            .filter(|&u| h.degree(u) == 1 && h.role(u) == Role::Heavy)
            .collect();
        if leaves.len() == 1 && h.neighbors(m).filter(|&u| h.degree(u) == 1).count() == 1 {
            out.insert(m, leaves[0]);
        }
    }
    out
}

fn mediated_rewrite(
    c: &Circuit,
    labeling: &HeavyLabeling,
    side: MediatorSide,
    leaves: &BTreeMap<NodeId, NodeId>,
) -> Result<Circuit, RouteError> {
    let n = labeling
        .heavy_graph
        .nodes()
        .last()
        .map_or(0, |v| v as usize + 1)
        .max(c.num_qubits);
    let mut out = Circuit::new(n);
    for gate in c.gates() {
        match *gate.qubits() {
            [_] => out.push(gate.clone()).unwrap(),
            [i, j] => {
                let m = labeling
                    .mediator(i, j)
                    .expect("every coupled pair has a mediator");
                let leaf = leaves.get(&m).copied().filter(|&l| l == i || l == j);
                let x = match (leaf, side) {
                    (Some(l), _) => l,
                    (None, MediatorSide::First) => i,
                    (None, _) => j,
                };
                let inner = if x == i { gate.on(&[m, j]) } else { gate.on(&[i, m]) };
                out.push(Gate::swap(m, x)).unwrap();
                out.push(inner).unwrap();
                out.push(Gate::swap(x, m)).unwrap();
            }
            ref q => return Err(RouteError::GateArity(q.len())),
        }
    }
    Ok(out)
}

/// Removes SWAP pairs on the same two qubits with no gate on either qubit in
/// between, repeatedly, until none remain.
///
/// One pass with a per-qubit stack of gate indices suffices: removing a pair
/// exposes the earlier gates on its qubits, which later SWAPs then see.
pub fn cancel_swaps(c: &Circuit) -> Circuit {
    let gates = c.gates();
    let mut alive = vec![true; gates.len()];
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); c.num_qubits];
    for (k, g) in gates.iter().enumerate() {
        if g.kind == GateKind::Swap {
            let (a, b) = (g.qubits()[0] as usize, g.qubits()[1] as usize);
            if let (Some(&ta), Some(&tb)) = (stacks[a].last(), stacks[b].last()) {
                if ta == tb && gates[ta].kind == GateKind::Swap {
                    alive[ta] = false;
                    alive[k] = false;
                    stacks[a].pop();
                    stacks[b].pop();
                    continue;
                }
            }
        }
        for &q in g.qubits() {
            stacks[q as usize].push(k);
        }
    }
    let mut out = Circuit::new(c.num_qubits);
    out.params = c.params.clone();
    for (g, keep) in gates.iter().zip(alive) {
        if keep {
            out.push(g.clone()).unwrap();
        }
    }
    out
}

/// Lone-leaf removal on a routed result: the mediator `m` of each lone leaf
/// `i` is taken over by `i`. SWAPs between `i` and `m` are dropped and `m` is
/// renamed `i`, so gates that `m` mediated for other pairs now pass through
/// `i`. A leaf whose position takes part in any two-qubit gate other than a
/// SWAP with `m` is left alone, and so is a leaf whose removal would make
/// the circuit deeper.
pub fn remove_lone_leaves(r: RoutingResult) -> RoutingResult {
    let leaves = lone_leaves(&r.hardware);
    let mut out = r;
    for (&m, &i) in &leaves {
        let trial = apply_lone_leaves(out.clone(), &BTreeMap::from([(m, i)]));
        if depth(&trial.circuit) <= depth(&out.circuit) {
            out = trial;
        }
    }
    let m = &mut out.metrics;
    m.depth = depth(&out.circuit);
    m.n_swap = out.circuit.count(GateKind::Swap);
    m.n_qubit = out.circuit.active_qubits().len();
    out
}

fn apply_lone_leaves(mut r: RoutingResult, leaves: &BTreeMap<NodeId, NodeId>) -> RoutingResult {
    let applicable: BTreeMap<NodeId, NodeId> = leaves
        .iter()
        .filter(|&(&m, &i)| {
            r.circuit.gates().iter().all(|g| {
                !(g.is_two_qubit() && g.qubits().contains(&i))
                    || (g.kind == GateKind::Swap && g.qubits().contains(&m))
            })
        })
        .map(|(&m, &i)| (m, i))
        .collect();
    if applicable.is_empty() {
        return r;
    }
    let leaf_of: BTreeMap<NodeId, NodeId> = applicable.iter().map(|(&m, &i)| (i, m)).collect();
    // Where each leaf's own content sits in the rewritten circuit. Other
    // pairs that `m` mediated now swap through `i` and carry it along.
    let mut loc: BTreeMap<NodeId, NodeId> = leaf_of.keys().map(|&i| (i, i)).collect();
    let mut out = Circuit::new(r.circuit.num_qubits);
    out.params = r.circuit.params.clone();
    for g in r.circuit.gates() {
        if g.kind == GateKind::Swap {
            let (a, b) = (g.qubits()[0], g.qubits()[1]);
            if leaf_of.get(&a) == Some(&b) || leaf_of.get(&b) == Some(&a) {
                continue;
            }
        }
        let mapped = if let [q] = *g.qubits() {
            g.on(&[loc.get(&q).copied().unwrap_or_else(|| applicable.get(&q).copied().unwrap_or(q))])
        } else {
            g.map_qubits(|q| applicable.get(&q).copied().unwrap_or(q))
        };
        if mapped.kind == GateKind::Swap {
            let (a, b) = (mapped.qubits()[0], mapped.qubits()[1]);
            for p in loc.values_mut() {
                if *p == a {
                    *p = b;
                } else if *p == b {
                    *p = a;
                }
            }
        }
        out.push(mapped).unwrap();
    }
    r.circuit = out;
    for (&m, &i) in &applicable {
        let nbrs: Vec<NodeId> = r.hardware.neighbors(m).filter(|&u| u != i).collect();
        r.hardware.remove_node(m);
        r.hardware.remove_node(i);
        r.hardware.add_node(i);
        r.hardware.set_role(i, Role::Heavy);
        for u in nbrs {
            r.hardware.add_edge(i, u).unwrap();
        }
    }
    r
}

/// Folds SWAPs that are the first gate on both of their qubits into the
/// initial layout, and SWAPs that are the last gate on both into the final
/// permutation.
pub fn elide_boundary_swaps(mut r: RoutingResult) -> RoutingResult {
    let gates = r.circuit.gates();
    let n = r.circuit.num_qubits;
    let mut drop = vec![false; gates.len()];

    // Leading SWAPs: track where each node's initial content has moved.
    let mut touched = vec![false; n];
    let mut at: Vec<NodeId> = (0..n as NodeId).collect(); // content origin at each node
    for (k, g) in gates.iter().enumerate() {
        let qs = g.qubits();
        if g.kind == GateKind::Swap && qs.iter().all(|&q| !touched[q as usize]) {
            drop[k] = true;
            at.swap(qs[0] as usize, qs[1] as usize);
        } else {
            for &q in qs {
                touched[q as usize] = true;
            }
        }
    }
    let mut moved_to: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (node, &origin) in at.iter().enumerate() {
        moved_to.insert(origin, node as NodeId);
    }
    for pos in r.initial_layout.values_mut() {
        *pos = moved_to[pos];
    }

    // Trailing SWAPs, scanning backwards over the gates still present.
    let mut touched = vec![false; n];
    for (k, g) in gates.iter().enumerate().rev() {
        if drop[k] {
            continue;
        }
        let qs = g.qubits();
        if g.kind == GateKind::Swap && qs.iter().all(|&q| !touched[q as usize]) {
            drop[k] = true;
        } else {
            for &q in qs {
                touched[q as usize] = true;
            }
        }
    }
    let mut out = Circuit::new(n);
    out.params = r.circuit.params.clone();
    for (g, d) in gates.iter().zip(drop) {
        if !d {
            out.push(g.clone()).unwrap();
        }
    }
    r.circuit = out;
    r.final_permutation = swap_permutation(&r.circuit);
    r
}

/// Start node to end node of every content moved by the SWAPs of `c`.
pub fn swap_permutation(c: &Circuit) -> BTreeMap<NodeId, NodeId> {
    let mut origin: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for g in c.gates().iter().filter(|g| g.kind == GateKind::Swap) {
        let (a, b) = (g.qubits()[0], g.qubits()[1]);
        let (oa, ob) = (origin.get(&a).copied().unwrap_or(a), origin.get(&b).copied().unwrap_or(b));
        origin.insert(a, ob);
        origin.insert(b, oa);
    }
    origin.into_iter().filter(|(node, o)| node != o).map(|(node, o)| (o, node)).collect()
}

/// Metrics of a routed circuit. `wall_time_s` is rounded to 0.01 s.
pub fn route_metrics(input: &Circuit, routed: &Circuit, wall_time_s: f64) -> MetricsRecord {
    MetricsRecord {
        depth: depth(routed),
        n_swap: routed.count(GateKind::Swap),
        n_qubit: routed.active_qubits().len(),
        wall_time_s: (wall_time_s * 100.0).round() / 100.0,
        lambda: input.two_qubit_count(),
        total_gates: input.len(),
    }
}

/// Baseline router: for every two-qubit gate, move the first operand along a
/// shortest path next to the second, apply the gate, and move it back.
///
/// Logical qubits keep their labels when all of them are target nodes;
/// otherwise they are placed on target nodes in ascending order.
pub fn naive_route(c: &Circuit, target: &Graph) -> Result<RoutingResult, RouteError> {
    let logical = c.active_qubits();
    let layout: BTreeMap<Qubit, NodeId> = if logical.iter().all(|&q| target.contains_node(q)) {
        logical.iter().map(|&q| (q, q)).collect()
    } else {
        logical.iter().copied().zip(target.nodes()).collect()
    };
    naive_route_with_layout(c, target, layout)
}

/// [`naive_route`] from a given initial layout, which must be injective and
/// cover every active qubit of `c`.
pub fn naive_route_with_layout(
    c: &Circuit,
    target: &Graph,
    layout: BTreeMap<Qubit, NodeId>,
) -> Result<RoutingResult, RouteError> {
    let start = Instant::now();
    let logical = c.active_qubits();
    if logical.len() > target.node_count() {
        return Err(RouteError::TargetTooSmall { target: target.node_count(), needed: logical.len() });
    }
    if !target.is_connected() {
        return Err(RouteError::TargetDisconnected);
    }
    let placed: BTreeSet<NodeId> = layout.values().copied().collect();
    if placed.len() != layout.len()
        || !placed.iter().all(|&v| target.contains_node(v))
        || !logical.iter().all(|q| layout.contains_key(q))
    {
        return Err(RouteError::BadLayout);
    }
    let n = target.nodes().last().map_or(0, |v| v as usize + 1);
    let mut out = Circuit::new(n);
    out.params = c.params.clone();
    for gate in c.gates() {
        let q = gate.qubits();
        if q.len() == 1 {
            out.push(gate.on(&[layout[&q[0]]])).unwrap();
            continue;
        }
        let (a, b) = (layout[&q[0]], layout[&q[1]]);
        let path = shortest_path(target, a, b);
        let hops = &path[..path.len() - 1];
        for w in hops.windows(2) {
            out.push(Gate::swap(w[0], w[1])).unwrap();
        }
        let near = *hops.last().unwrap();
        out.push(gate.on(&[near, b])).unwrap();
        for w in hops.windows(2).rev() {
            out.push(Gate::swap(w[1], w[0])).unwrap();
        }
    }
    let mut hardware = target.clone();
    for &v in layout.values() {
        if hardware.role(v) == Role::Plain {
            hardware.set_role(v, Role::Heavy);
        }
    }
    let metrics = route_metrics(c, &out, start.elapsed().as_secs_f64());
    Ok(RoutingResult {
        circuit: out,
        initial_layout: layout,
        final_permutation: BTreeMap::new(),
        hardware,
        metrics,
    })
}

/// BFS shortest path visiting neighbors in ascending order.
fn shortest_path(g: &Graph, from: NodeId, to: NodeId) -> Vec<NodeId> {
    let mut prev = BTreeMap::new();
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for u in g.neighbors(v) {
            if seen.insert(u) {
                prev.insert(u, v);
                queue.push_back(u);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// True when every two-qubit gate of `c` acts along an edge of `hw`.
pub fn respects_hardware(c: &Circuit, hw: &Graph) -> bool {
    c.gates()
        .iter()
        .filter(|g| g.is_two_qubit())
        .all(|g| hw.has_edge(g.qubits()[0], g.qubits()[1]))
}

/// Pairs coupled in the original circuit, for the mediator lookups of tests.
pub fn coupled_pairs(c: &Circuit) -> BTreeSet<(NodeId, NodeId)> {
    c.gates()
        .iter()
        .filter(|g| g.is_two_qubit())
        .map(|g| edge_key(g.qubits()[0], g.qubits()[1]))
        .collect()
}
