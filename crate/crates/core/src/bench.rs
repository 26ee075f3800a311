//! Benchmark harness: generate a lattice circuit, route it with each method,
//! and summarize repetitions as a table and CSV.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{heis_circuit, random_circuit, Circuit, CircuitError, HeisParams, LayerOrder};
use crate::graph::{edge_coloring, Graph, NoPerfectMatching, NodeId};
use crate::lattices::{Family, LatticeError, PatchSpec, Size};
use crate::router::{
    line_graph_route_on, naive_route, naive_route_with_layout, MediatorSide, RouteError, RouteOptions,
    RoutingResult,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum BenchError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Coloring(#[from] NoPerfectMatching),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error("unknown method {0:?}, expected line-graph, naive or naive-random")]
    UnknownMethod(String),
    #[error("unknown circuit type {0:?}, expected quantum_simulation or random")]
    UnknownCircuitType(String),
    #[error("repetitions must be at least 1")]
    NoRepetitions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitType {
    /// HEIS circuit with `p` cycles.
    QuantumSimulation,
    /// `p` random gates along the lattice edges.
    Random,
}

impl FromStr for CircuitType {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "quantum_simulation" | "heis" => Ok(CircuitType::QuantumSimulation),
            "random" => Ok(CircuitType::Random),
            _ => Err(BenchError::UnknownCircuitType(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    LineGraph,
    /// Shortest-path SWAP chains on the same hardware graph, identity layout.
    Naive,
    /// As `Naive` from a uniformly random initial layout per repetition.
    NaiveRandom,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::LineGraph => "line-graph",
            Method::Naive => "naive",
            Method::NaiveRandom => "naive-random",
        }
    }

    pub fn deterministic(self) -> bool {
        !matches!(self, Method::NaiveRandom)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "line-graph" => Ok(Method::LineGraph),
            "naive" => Ok(Method::Naive),
            "naive-random" => Ok(Method::NaiveRandom),
            _ => Err(BenchError::UnknownMethod(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub family: Family,
    pub size: Size,
    pub circuit_type: CircuitType,
    /// Cycles for quantum simulation, gate count for random circuits.
    pub p: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub side: MediatorSide,
    pub lone_leaf: bool,
    /// Worker threads for repetitions; 0 lets rayon decide.
    pub jobs: usize,
    pub output: Option<String>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            family: Family::Kagome,
            size: Size::Grid { rows: 1.0, cols: 1.0 },
            circuit_type: CircuitType::QuantumSimulation,
            p: 1,
            repetitions: 1,
            seed: 0,
            methods: vec![Method::LineGraph],
            side: MediatorSide::First,
            lone_leaf: true,
            jobs: 0,
            output: None,
        }
    }
}

/// One repetition of one method.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub n_swap: usize,
    pub depth: usize,
    pub n_qubit: usize,
    pub lambda: usize,
    pub time_s: f64,
}

/// Summary of all repetitions of one method.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub samples: Vec<Sample>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

impl BenchRow {
    fn column(&self, f: impl Fn(&Sample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }

    pub fn n_swaps(&self) -> Vec<f64> {
        self.column(|s| s.n_swap as f64)
    }

    pub fn depths(&self) -> Vec<f64> {
        self.column(|s| s.depth as f64)
    }

    pub fn qubits(&self) -> Vec<f64> {
        self.column(|s| s.n_qubit as f64)
    }

    pub fn times(&self) -> Vec<f64> {
        self.column(|s| s.time_s)
    }

    pub fn lambda(&self) -> usize {
        self.samples.first().map_or(0, |s| s.lambda)
    }
}

/// Symmetrized 95% percentile-bootstrap half-width of the mean.
///
/// Returns `None` for fewer than two samples. Deterministic given `seed`.
pub fn bootstrap_ci(samples: &[f64], resamples: usize, seed: u64) -> Option<f64> {
    if samples.len() < 2 || resamples == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = samples.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| samples[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let at = |q: f64| means[((q * (resamples - 1) as f64).round() as usize).min(resamples - 1)];
    Some((at(0.975) - at(0.025)) / 2.0)
}

pub const BOOTSTRAP_RESAMPLES: usize = 10_000;

/// The circuit a config describes.
pub fn bench_circuit(cfg: &BenchConfig) -> Result<Circuit, BenchError> {
    Ok(bench_instance(cfg)?.1)
}

/// The lattice graph of `cfg` together with the circuit built on it.
pub fn bench_instance(cfg: &BenchConfig) -> Result<(Graph, Circuit), BenchError> {
    let spec = PatchSpec { family: cfg.family, size: cfg.size, seed: Some(cfg.seed) };
    let g = spec.generate()?.graph;
    let c = match cfg.circuit_type {
        CircuitType::QuantumSimulation => {
            let (colored, _) = edge_coloring(&g)?;
            heis_circuit(&colored, cfg.p, &HeisParams::Symbolic, LayerOrder::default())?
        }
        CircuitType::Random => random_circuit(&g, cfg.p, cfg.seed)?,
    };
    Ok((g, c))
}

fn sample(r: &RoutingResult, time_s: f64) -> Sample {
    Sample {
        n_swap: r.metrics.n_swap,
        depth: r.metrics.depth,
        n_qubit: r.metrics.n_qubit,
        lambda: r.metrics.lambda,
        time_s,
    }
}

/// Repetitions actually run for `method`: one for deterministic methods.
pub fn effective_repetitions(method: Method, requested: usize) -> usize {
    if method.deterministic() {
        1
    } else {
        requested
    }
}

/// Runs every configured method on the configured circuit.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if cfg.repetitions == 0 {
        return Err(BenchError::NoRepetitions);
    }
    let (lattice, circuit) = bench_instance(cfg)?;
    let opts = RouteOptions { side: cfg.side, lone_leaf: cfg.lone_leaf, ..RouteOptions::default() };
    // Baselines route onto the same hardware graph as line-graph routing.
    let lg = line_graph_route_on(&circuit, &lattice, opts)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .expect("thread pool builds");
    let mut rows = Vec::new();
    for &method in &cfg.methods {
        let reps = effective_repetitions(method, cfg.repetitions);
        let run_one = |rep: usize| -> Result<Sample, BenchError> {
            let start = Instant::now();
            let r = match method {
                Method::LineGraph => line_graph_route_on(&circuit, &lattice, opts)?,
                Method::Naive => naive_route(&circuit, &lg.hardware)?,
                Method::NaiveRandom => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(rep as u64);
                    let mut nodes: Vec<NodeId> = lg.hardware.nodes().collect();
                    nodes.shuffle(&mut rng);
                    let layout: BTreeMap<_, _> = circuit.active_qubits().into_iter().zip(nodes).collect();
                    naive_route_with_layout(&circuit, &lg.hardware, layout)?
                }
            };
            Ok(sample(&r, start.elapsed().as_secs_f64()))
        };
        let samples: Result<Vec<Sample>, BenchError> =
            pool.install(|| (0..reps).into_par_iter().map(run_one).collect());
        rows.push(BenchRow { method, samples: samples? });
    }
    Ok(rows)
}

pub const COLUMNS: [&str; 10] = [
    "method",
    "av. n_swaps",
    "min. n_swap",
    "av. depth",
    "min. depth",
    "av. n_qubits",
    "min. qubits",
    "total time",
    "av. time",
    "min. time",
];
const CI_COLUMNS: [&str; 3] = ["n_swaps ci95", "depth ci95", "time ci95"];
const TIMING: [&str; 4] = ["total time", "av. time", "min. time", "time ci95"];

fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.3}")
    }
}

fn ci(v: Option<f64>) -> String {
    match v {
        Some(h) if h > 0.0 => format!("{h:.3}"),
        _ => "nan".into(),
    }
}

/// Header and cells of the report. Timing columns are dropped when
/// `timing` is false so the output is reproducible byte for byte.
pub fn report_cells(rows: &[BenchRow], seed: u64, timing: bool) -> (Vec<String>, Vec<Vec<String>>) {
    let header: Vec<String> = COLUMNS
        .iter()
        .chain(CI_COLUMNS.iter())
        .filter(|c| timing || !TIMING.contains(c))
        .map(|c| c.to_string())
        .collect();
    let cells = rows
        .iter()
        .map(|r| {
            let (sw, de, qu, ti) = (r.n_swaps(), r.depths(), r.qubits(), r.times());
            let all = [
                ("method", r.method.to_string()),
                ("av. n_swaps", num(mean(&sw))),
                ("min. n_swap", num(min(&sw))),
                ("av. depth", num(mean(&de))),
                ("min. depth", num(min(&de))),
                ("av. n_qubits", num(mean(&qu))),
                ("min. qubits", num(min(&qu))),
                ("total time", format!("{:.3}", ti.iter().sum::<f64>())),
                ("av. time", format!("{:.3}", mean(&ti))),
                ("min. time", format!("{:.3}", min(&ti))),
                ("n_swaps ci95", ci(bootstrap_ci(&sw, BOOTSTRAP_RESAMPLES, seed))),
                ("depth ci95", ci(bootstrap_ci(&de, BOOTSTRAP_RESAMPLES, seed))),
                ("time ci95", ci(bootstrap_ci(&ti, BOOTSTRAP_RESAMPLES, seed))),
            ];
            all.into_iter()
                .filter(|(name, _)| header.iter().any(|h| h == name))
                .map(|(_, v)| v)
                .collect()
        })
        .collect();
    (header, cells)
}

pub fn to_csv(rows: &[BenchRow], seed: u64, timing: bool) -> String {
    let (header, cells) = report_cells(rows, seed, timing);
    let mut out = header.join(",") + "\n";
    for row in cells {
        out += &row.join(",");
        out.push('\n');
    }
    out
}

/// Right-aligned text table with the same columns as the CSV.
pub fn to_table(rows: &[BenchRow], seed: u64, timing: bool) -> String {
    let (header, cells) = report_cells(rows, seed, timing);
    let widths: Vec<usize> = (0..header.len())
        .map(|k| cells.iter().map(|r| r[k].len()).chain([header[k].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, row: &[String]| {
        let parts: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  "));
    };
    line(&mut out, &header);
    for r in &cells {
        line(&mut out, r);
    }
    out
}
