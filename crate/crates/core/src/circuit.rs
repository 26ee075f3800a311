//! Circuit IR and the two circuit builders: random circuits and
//! edge-coloring-driven HEIS circuits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_perfect_matching, Graph, NodeId};

pub type Qubit = NodeId;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {kind} acts on qubit {qubit}, but the circuit has {n} qubits")]
    QubitOutOfRange { kind: GateKind, qubit: Qubit, n: usize },
    #[error("gate {0} acts twice on qubit {1}")]
    RepeatedQubit(GateKind, Qubit),
    #[error("gate {kind} takes {expected} qubit(s), got {got}")]
    Arity { kind: GateKind, expected: usize, got: usize },
    #[error("gate {0} takes no parameter")]
    UnexpectedParam(GateKind),
    #[error("HEIS gate needs a parameter")]
    MissingParam,
    #[error("unknown gate kind {0:?}")]
    UnknownGate(String),
    #[error("cannot build a random circuit on an empty graph")]
    EmptyGraph,
    #[error("color 0 is not a perfect matching")]
    NotPerfectMatching,
    #[error("edge ({0}, {1}) has no color")]
    Uncolored(NodeId, NodeId),
    #[error("invalid circuit JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    S,
    T,
    X,
    Z,
    Cnot,
    Swap,
    Singlet,
    Heis,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::S,
        GateKind::T,
        GateKind::X,
        GateKind::Z,
        GateKind::Cnot,
        GateKind::Swap,
        GateKind::Singlet,
        GateKind::Heis,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::S | GateKind::T | GateKind::X | GateKind::Z => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::Singlet => "SINGLET",
            GateKind::Heis => "HEIS",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase();
        let up = if up == "CX" { "CNOT".to_string() } else { up };
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == up)
            .ok_or_else(|| CircuitError::UnknownGate(s.to_string()))
    }
}

/// HEIS angle: a number, or a named free parameter bound at simulation time.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Value(f64),
    Symbol(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    /// Second slot repeats the first for single-qubit gates.
    q: [Qubit; 2],
    pub param: Option<Param>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[Qubit], param: Option<Param>) -> Result<Gate, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity { kind, expected: kind.arity(), got: qubits.len() });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(CircuitError::RepeatedQubit(kind, qubits[0]));
        }
        match (kind, &param) {
            (GateKind::Heis, None) => return Err(CircuitError::MissingParam),
            (GateKind::Heis, Some(_)) | (_, None) => {}
            (_, Some(_)) => return Err(CircuitError::UnexpectedParam(kind)),
        }
        let q = [qubits[0], *qubits.last().unwrap()];
        Ok(Gate { kind, q, param })
    }

    pub fn one(kind: GateKind, q: Qubit) -> Gate {
        assert_eq!(kind.arity(), 1, "{kind} is not a single-qubit gate");
        Gate { kind, q: [q, q], param: None }
    }

    fn two(kind: GateKind, a: Qubit, b: Qubit, param: Option<Param>) -> Gate {
        assert_ne!(a, b, "{kind} needs two distinct qubits");
        Gate { kind, q: [a, b], param }
    }

    pub fn cnot(control: Qubit, target: Qubit) -> Gate {
        Gate::two(GateKind::Cnot, control, target, None)
    }

    pub fn swap(a: Qubit, b: Qubit) -> Gate {
        Gate::two(GateKind::Swap, a, b, None)
    }

    pub fn singlet(a: Qubit, b: Qubit) -> Gate {
        Gate::two(GateKind::Singlet, a, b, None)
    }

    pub fn heis(a: Qubit, b: Qubit, param: Param) -> Gate {
        Gate::two(GateKind::Heis, a, b, Some(param))
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.q[..self.kind.arity()]
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// The same gate on other qubits.
    pub fn on(&self, qubits: &[Qubit]) -> Gate {
        let mut g = self.clone();
        g.q = [qubits[0], *qubits.last().unwrap()];
        g
    }

    pub fn map_qubits(&self, f: impl Fn(Qubit) -> Qubit) -> Gate {
        let mut g = self.clone();
        g.q = [f(self.q[0]), f(self.q[1])];
        g
    }
}

/// Ordered gate list over qubits `0..num_qubits`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    gates: Vec<Gate>,
    /// Names of free parameters, in order of first use.
    pub params: Vec<String>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new(), params: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        for &q in gate.qubits() {
            if q as usize >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange { kind: gate.kind, qubit: q, n: self.num_qubits });
            }
        }
        if let Some(Param::Symbol(name)) = &gate.param {
            if !self.params.contains(name) {
                self.params.push(name.clone());
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Builds a circuit, growing `num_qubits` to cover every gate.
    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Self {
        let gates: Vec<Gate> = gates.into_iter().collect();
        let need = gates
            .iter()
            .flat_map(|g| g.qubits().iter().map(|&q| q as usize + 1))
            .max()
            .unwrap_or(0);
        let mut c = Circuit::new(num_qubits.max(need));
        for g in gates {
            c.push(g).expect("num_qubits covers every gate");
        }
        c
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Two-qubit gate count (lambda).
    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Qubits touched by at least one gate, ascending.
    pub fn active_qubits(&self) -> Vec<Qubit> {
        let mut seen = vec![false; self.num_qubits];
        for g in &self.gates {
            for &q in g.qubits() {
                seen[q as usize] = true;
            }
        }
        (0..self.num_qubits as Qubit).filter(|&q| seen[q as usize]).collect()
    }
}

/// Graph with one node per qubit that appears in `c` and one edge per
/// unordered pair acted on by a two-qubit gate.
pub fn coupling_graph(c: &Circuit) -> Graph {
    let mut g = Graph::new();
    for gate in c.gates() {
        match *gate.qubits() {
            [a] => g.add_node(a),
            [a, b] => g.add_edge(a, b).expect("gate qubits are distinct"),
            _ => unreachable!(),
        }
    }
    g
}

/// Longest chain of gates sharing qubits, every gate counting one layer.
pub fn depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.num_qubits];
    let mut d = 0;
    for g in c.gates() {
        let l = g.qubits().iter().map(|&q| level[q as usize]).max().unwrap_or(0) + 1;
        for &q in g.qubits() {
            level[q as usize] = l;
        }
        d = d.max(l);
    }
    d
}

/// Random circuit with exactly `n_gates` gates on the nodes of `g`.
///
/// Each gate is drawn independently from a ChaCha8 stream seeded with
/// `seed`: one `f64`; below 0.4 a CNOT on a uniformly chosen edge (control is
/// the smaller label), otherwise a uniform choice of H, S or T on a uniformly
/// chosen node. Qubit count is `max label + 1`.
pub fn random_circuit(g: &Graph, n_gates: usize, seed: u64) -> Result<Circuit, CircuitError> {
    if g.is_empty() {
        return Err(CircuitError::EmptyGraph);
    }
    let nodes: Vec<NodeId> = g.nodes().collect();
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let n = *nodes.last().unwrap() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for _ in 0..n_gates {
        let draw: f64 = rng.gen();
        let gate = if draw < 0.4 && !edges.is_empty() {
            let (a, b) = edges[rng.gen_range(0..edges.len())];
            Gate::cnot(a, b)
        } else {
            let kind = [GateKind::H, GateKind::S, GateKind::T][rng.gen_range(0..3)];
            Gate::one(kind, nodes[rng.gen_range(0..nodes.len())])
        };
        c.push(gate)?;
    }
    Ok(c)
}

/// How HEIS angles are assigned.
#[derive(Clone, Debug, PartialEq)]
pub enum HeisParams {
    /// Every HEIS gate gets its own symbol `al_<k>` (variational ansatz).
    Symbolic,
    /// Every HEIS gate uses the same angle (Trotter step, alpha = 4t/r).
    Fixed(f64),
}

/// Order of the color layers inside one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LayerOrder {
    /// Colors `0, 1, ..., k-1`.
    #[default]
    Ascending,
    /// Colors `1, ..., k-1`, then color 0 closes the cycle.
    MatchingLast,
}

impl LayerOrder {
    pub fn colors(self, k: usize) -> Vec<usize> {
        match self {
            LayerOrder::Ascending => (0..k).collect(),
            LayerOrder::MatchingLast => (1..k).chain((k > 0).then_some(0)).collect(),
        }
    }
}

/// Heisenberg circuit from an edge coloring: a SINGLET on every color-0
/// edge, then `p` cycles of HEIS layers, one layer per color in `order`.
/// Edges within a color are taken in sorted order.
pub fn heis_circuit(
    colored: &Graph,
    p: usize,
    params: &HeisParams,
    order: LayerOrder,
) -> Result<Circuit, CircuitError> {
    for (a, b) in colored.edges() {
        if colored.color(a, b).is_none() {
            return Err(CircuitError::Uncolored(a, b));
        }
    }
    let matching = colored.edges_of_color(0);
    if !is_perfect_matching(colored, &matching) {
        return Err(CircuitError::NotPerfectMatching);
    }
    let k = colored.colors().values().max().map_or(0, |&m| m + 1);
    let by_color: BTreeMap<usize, Vec<(NodeId, NodeId)>> =
        (0..k).map(|c| (c, colored.edges_of_color(c))).collect();
    let n = colored.nodes().last().map_or(0, |v| v as usize + 1);
    let mut c = Circuit::new(n);
    for &(a, b) in &matching {
        c.push(Gate::singlet(a, b))?;
    }
    let mut next = 0usize;
    for _ in 0..p {
        for color in order.colors(k) {
            for &(a, b) in &by_color[&color] {
                let param = match params {
                    HeisParams::Symbolic => Param::Symbol(format!("al_{next}")),
                    HeisParams::Fixed(alpha) => Param::Value(*alpha),
                };
                next += 1;
                c.push(Gate::heis(a, b, param))?;
            }
        }
    }
    Ok(c)
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    k: String,
    q: Vec<Qubit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    gates: Vec<GateJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    params: Vec<String>,
}

impl Circuit {
    pub fn to_json_value(&self) -> serde_json::Value {
        let file = CircuitJson {
            n: self.num_qubits,
            gates: self
                .gates
                .iter()
                .map(|g| GateJson {
                    k: g.kind.name().to_string(),
                    q: g.qubits().to_vec(),
                    p: match &g.param {
                        Some(Param::Value(v)) => Some(*v),
                        _ => None,
                    },
                    name: match &g.param {
                        Some(Param::Symbol(s)) => Some(s.clone()),
                        _ => None,
                    },
                })
                .collect(),
            params: self.params.clone(),
        };
        serde_json::to_value(file).expect("circuit serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("circuit serializes")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Circuit, CircuitError> {
        let file: CircuitJson =
            serde_json::from_value(v).map_err(|e| CircuitError::Json(e.to_string()))?;
        let mut c = Circuit::new(file.n);
        for g in file.gates {
            let kind: GateKind = g.k.parse()?;
            let param = match (g.p, g.name) {
                (Some(v), _) => Some(Param::Value(v)),
                (None, Some(s)) => Some(Param::Symbol(s)),
                (None, None) => None,
            };
            c.push(Gate::new(kind, &g.q, param)?)?;
        }
        for name in file.params {
            if !c.params.contains(&name) {
                c.params.push(name);
            }
        }
        Ok(c)
    }

    pub fn from_json(text: &str) -> Result<Circuit, CircuitError> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
        Circuit::from_json_value(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;

    #[test]
    fn gate_validation() {
        assert!(Gate::new(GateKind::H, &[0, 1], None).is_err());
        assert!(Gate::new(GateKind::Cnot, &[2, 2], None).is_err());
        assert!(Gate::new(GateKind::Heis, &[0, 1], None).is_err());
        assert!(Gate::new(GateKind::X, &[0], Some(Param::Value(1.0))).is_err());
        assert_eq!(Gate::new(GateKind::Swap, &[3, 1], None).unwrap().qubits(), &[3, 1]);
        let mut c = Circuit::new(2);
        assert!(matches!(c.push(Gate::cnot(0, 2)), Err(CircuitError::QubitOutOfRange { .. })));
    }

    #[test]
    fn coupling_graph_is_unordered() {
        assert!(coupling_graph(&Circuit::new(0)).is_empty());
        let c = Circuit::from_gates(2, [Gate::cnot(0, 1), Gate::cnot(1, 0)]);
        let g = coupling_graph(&c);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn depth_counts_layers() {
        let c = Circuit::from_gates(1, (0..5).map(|_| Gate::one(GateKind::H, 0)));
        assert_eq!(depth(&c), 5);
        let c = Circuit::from_gates(4, [Gate::cnot(0, 1), Gate::cnot(2, 3), Gate::swap(1, 2)]);
        assert_eq!(depth(&c), 2);
        assert_eq!(depth(&Circuit::new(3)), 0);
    }

    #[test]
    fn random_circuit_basics() {
        let g = cycle_graph(6);
        assert!(random_circuit(&g, 0, 1).unwrap().is_empty());
        let a = random_circuit(&g, 200, 9).unwrap();
        assert_eq!(a, random_circuit(&g, 200, 9).unwrap());
        assert_ne!(a, random_circuit(&g, 200, 10).unwrap());
        for gate in a.gates() {
            if gate.kind == GateKind::Cnot {
                assert!(gate.qubits()[0] < gate.qubits()[1]);
                assert!(g.has_edge(gate.qubits()[0], gate.qubits()[1]));
            }
        }
        assert_eq!(random_circuit(&Graph::new(), 3, 0), Err(CircuitError::EmptyGraph));
    }

    #[test]
    fn heis_on_four_cycle() {
        let mut g = cycle_graph(4);
        for (a, b, c) in [(0, 1, 0), (2, 3, 0), (1, 2, 1), (0, 3, 1)] {
            g.set_color(a, b, c).unwrap();
        }
        let c = heis_circuit(&g, 0, &HeisParams::Symbolic, LayerOrder::Ascending).unwrap();
        assert_eq!((c.len(), depth(&c)), (2, 1));
        let c = heis_circuit(&g, 2, &HeisParams::Symbolic, LayerOrder::Ascending).unwrap();
        assert_eq!(c.len(), 2 + 2 * 4);
        assert_eq!(c.params.len(), 8);
        assert_eq!(depth(&c), 5);
        g.set_color(0, 1, 2).unwrap();
        assert_eq!(
            heis_circuit(&g, 1, &HeisParams::Fixed(0.1), LayerOrder::Ascending),
            Err(CircuitError::NotPerfectMatching)
        );
    }

    #[test]
    fn layer_orders() {
        assert_eq!(LayerOrder::Ascending.colors(3), vec![0, 1, 2]);
        assert_eq!(LayerOrder::MatchingLast.colors(3), vec![1, 2, 0]);
    }

    #[test]
    fn json_roundtrip() {
        let c = Circuit::from_gates(
            3,
            [
                Gate::one(GateKind::T, 2),
                Gate::heis(0, 1, Param::Value(0.25)),
                Gate::heis(1, 2, Param::Symbol("al_3".into())),
                Gate::singlet(2, 0),
            ],
        );
        assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
        assert!(Circuit::from_json(r#"{"n":2,"gates":[{"k":"FOO","q":[0]}]}"#).is_err());
    }
}
