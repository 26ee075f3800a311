//! `lgr`: generate lattices and circuits, route them onto heavy hardware,
//! check the result by simulation, and benchmark routing methods.

mod error;

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lgr_core::bench::{run_bench, to_csv, to_table, BenchConfig, BenchError, CircuitType, Method};
use lgr_core::circuit::{heis_circuit, random_circuit, Circuit, HeisParams, LayerOrder};
use lgr_core::graph::{edge_coloring, io as graph_io, vf2_embed, Graph, NodeId};
use lgr_core::lattices::{Family, PatchSpec, Size};
use lgr_core::qasm::{dump_circuit, load_circuit, CircuitFormat};
use lgr_core::router::{line_graph_route, line_graph_route_on, MediatorSide, RouteOptions, RoutingResult};
use lgr_core::sim::{random_bindings, verify_equivalence, Bindings};

use error::CliError;

const SEED_ENV: &str = "LGR_SEED";

#[derive(Parser, Debug)]
#[command(author, version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a lattice patch and write its graph as JSON.
    Gen(GenArgs),
    /// Build a HEIS or random circuit on a lattice or a graph file.
    Circuit(CircuitArgs),
    /// Route a circuit onto the heavy graph of its coupling graph.
    Route(RouteArgs),
    /// Check a routing result against the original circuit by simulation.
    Verify(VerifyArgs),
    /// Benchmark routing methods on a lattice circuit.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct PatchArgs {
    /// Lattice family: kagome, shuriken, checkerboard, complete.
    #[arg(long)]
    family: Option<Family>,
    /// Patch size such as 3x3, 2.5x2.5, or a node count for complete graphs.
    #[arg(long)]
    size: Option<Size>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    patch: PatchArgs,
    /// Seed for families that draw randomly. Defaults to $LGR_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct CircuitArgs {
    /// Graph file (JSON or edge list) used instead of a lattice family.
    #[arg(long, conflicts_with_all = ["family", "size"])]
    graph: Option<String>,
    #[command(flatten)]
    patch: PatchArgs,
    /// quantum_simulation (alias heis) or random.
    #[arg(long = "type", default_value = "quantum_simulation")]
    circuit_type: CircuitType,
    /// HEIS cycles, or number of gates for random circuits.
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed HEIS angle instead of one symbolic parameter per gate.
    #[arg(long)]
    alpha: Option<f64>,
    /// Output path; `.qasm` selects OpenQASM, anything else JSON.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Side {
    First,
    Second,
}

impl From<Side> for MediatorSide {
    fn from(s: Side) -> Self {
        match s {
            Side::First => MediatorSide::First,
            Side::Second => MediatorSide::Second,
        }
    }
}

#[derive(Args, Debug)]
struct RouteArgs {
    /// Input circuit (OpenQASM 2 or JSON), `-` for stdin.
    #[arg(long = "in", default_value = "-")]
    input: String,
    /// Value for a symbolic QASM parameter, NAME=VALUE. Repeatable.
    #[arg(long = "bind", value_parser = parse_binding)]
    bind: Vec<(String, f64)>,
    /// Operand swapped into the mediator.
    #[arg(long, value_enum, default_value = "first")]
    side: Side,
    /// Keep mediators of lone leaves.
    #[arg(long)]
    no_lone_leaf: bool,
    /// Drop the first and last SWAP on each mediator and track the moved
    /// qubits in the final permutation.
    #[arg(long)]
    elide_boundary: bool,
    /// Line graph to route against instead of the circuit's own coupling
    /// graph, for circuits that use only part of a lattice.
    #[arg(long)]
    coupling: Option<String>,
    /// Host coupling graph to embed the routed hardware graph into.
    #[arg(long)]
    host: Option<String>,
    /// Routing result JSON, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Also write the routed circuit alone; format follows the extension.
    #[arg(long)]
    circuit_out: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Circuit that was routed.
    #[arg(long)]
    original: String,
    /// Routing result JSON written by `lgr route`.
    #[arg(long)]
    routed: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Value for a symbolic parameter; unbound ones get random values.
    #[arg(long = "bind", value_parser = parse_binding)]
    bind: Vec<(String, f64)>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// BenchConfig JSON; flags override its fields.
    #[arg(long)]
    config: Option<String>,
    #[command(flatten)]
    patch: PatchArgs,
    #[arg(long = "type")]
    circuit_type: Option<CircuitType>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    side: Option<Side>,
    #[arg(long)]
    no_lone_leaf: bool,
    /// Comma-separated: line-graph, naive, naive-random.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Worker threads, 0 for automatic.
    #[arg(long)]
    jobs: Option<usize>,
    /// CSV output path, `-` for stdout instead of the table.
    #[arg(long)]
    out: Option<String>,
    /// Print timing columns as nan so output is reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn parse_binding(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad value for {name}: {e}"))?;
    Ok((name.trim().to_string(), value))
}

fn read_input(path: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.to_string(), source };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn write_output(path: &str, text: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_string(), source };
    if path == "-" {
        std::io::stdout().write_all(text.as_bytes()).map_err(io)
    } else {
        std::fs::write(path, text).map_err(io)
    }
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn seed_or_env(flag: Option<u64>) -> Result<u64, CliError> {
    Ok(match flag {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    })
}

fn patch_graph(patch: &PatchArgs, seed: u64) -> Result<Graph, CliError> {
    let (Some(family), Some(size)) = (patch.family, patch.size) else {
        return Err(CliError::Usage("--family and --size are both required".into()));
    };
    let spec = PatchSpec { family, size, seed: Some(seed) };
    Ok(spec.generate()?.graph)
}

fn load_graph(path: &str) -> Result<Graph, CliError> {
    graph_io::parse_graph(&read_input(path)?)
        .map_err(|source| CliError::GraphFile { path: path.to_string(), source })
}

fn load(path: &str, bindings: &Bindings) -> Result<Circuit, CliError> {
    let text = read_input(path)?;
    let format = CircuitFormat::from_path(path).unwrap_or_else(|| CircuitFormat::detect(&text));
    let parsed = load_circuit(&text, format, bindings)
        .map_err(|source| CliError::Qasm { path: path.to_string(), source })?;
    for w in parsed.warnings {
        eprintln!("warning: {path}: {w}");
    }
    Ok(parsed.circuit)
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let g = patch_graph(&args.patch, seed_or_env(args.seed)?)?;
    eprintln!("{} nodes, {} edges", g.node_count(), g.edge_count());
    write_output(&args.out, &(graph_io::to_json(&g) + "\n"))
}

fn cmd_circuit(args: CircuitArgs) -> Result<(), CliError> {
    let seed = seed_or_env(args.seed)?;
    let g = match &args.graph {
        Some(path) => load_graph(path)?,
        None => patch_graph(&args.patch, seed)?,
    };
    let c = match args.circuit_type {
        CircuitType::QuantumSimulation => {
            let (colored, _) = edge_coloring(&g).map_err(BenchError::from)?;
            let params = match args.alpha {
                Some(a) => HeisParams::Fixed(a),
                None => HeisParams::Symbolic,
            };
            heis_circuit(&colored, args.p, &params, LayerOrder::default()).map_err(BenchError::from)?
        }
        CircuitType::Random => random_circuit(&g, args.p, seed).map_err(BenchError::from)?,
    };
    let format = CircuitFormat::from_path(&args.out).unwrap_or(CircuitFormat::Json);
    eprintln!("{} qubits, {} gates", c.num_qubits, c.len());
    write_output(&args.out, &dump_circuit(&c, format))
}

/// Moves a routing result from its own hardware labels onto host nodes.
fn relabel_onto(r: RoutingResult, map: &BTreeMap<NodeId, NodeId>) -> RoutingResult {
    let at = |v: NodeId| map[&v];
    let n = map.values().max().map_or(0, |&m| m as usize + 1);
    let gates: Vec<_> = r.circuit.gates().iter().map(|g| g.map_qubits(at)).collect();
    let mut circuit = Circuit::from_gates(n, gates);
    circuit.params = r.circuit.params.clone();
    RoutingResult {
        circuit,
        initial_layout: r.initial_layout.iter().map(|(&q, &v)| (q, at(v))).collect(),
        final_permutation: r.final_permutation.iter().map(|(&a, &b)| (at(a), at(b))).collect(),
        hardware: r.hardware.relabel(map),
        metrics: r.metrics,
    }
}

fn cmd_route(args: RouteArgs) -> Result<(), CliError> {
    let bindings: Bindings = args.bind.into_iter().collect();
    let c = load(&args.input, &bindings)?;
    let opts = RouteOptions {
        side: args.side.into(),
        lone_leaf: !args.no_lone_leaf,
        elide_boundary: args.elide_boundary,
    };
    let mut r = match &args.coupling {
        Some(path) => line_graph_route_on(&c, &load_graph(path)?, opts)?,
        None => line_graph_route(&c, opts)?,
    };
    if let Some(host) = &args.host {
        let host = load_graph(host)?;
        let map = vf2_embed(&r.hardware, &host).map_err(|_| CliError::NoEmbedding)?;
        r = relabel_onto(r, &map);
    }
    let m = &r.metrics;
    eprintln!(
        "depth {} n_swap {} n_qubit {} lambda {} wall {:.2}s",
        m.depth, m.n_swap, m.n_qubit, m.lambda, m.wall_time_s
    );
    if let Some(path) = &args.circuit_out {
        let format = CircuitFormat::from_path(path).unwrap_or(CircuitFormat::Json);
        write_output(path, &dump_circuit(&r.circuit, format))?;
    }
    write_output(&args.out, &(r.to_json() + "\n"))
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let seed = seed_or_env(args.seed)?;
    let explicit: Bindings = args.bind.into_iter().collect();
    let original = load(&args.original, &explicit)?;
    let text = read_input(&args.routed)?;
    let routed = RoutingResult::from_json(&text)
        .map_err(|source| CliError::ResultFile { path: args.routed.clone(), source })?;
    let mut bindings = random_bindings(&original, seed);
    bindings.extend(explicit);
    let report = verify_equivalence(&original, &routed, &bindings, args.trials, seed)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_output("-", &(json + "\n"))?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::VerificationFailed { fidelity: report.min_fidelity, ret: report.mediator_return_min })
    }
}

fn bench_config(args: &BenchArgs) -> Result<BenchConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = read_input(path)?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?
        }
        None => {
            let mut cfg = BenchConfig::default();
            cfg.seed = env_seed()?.unwrap_or(cfg.seed);
            cfg
        }
    };
    if let Some(f) = args.patch.family {
        cfg.family = f;
    }
    if let Some(s) = args.patch.size {
        cfg.size = s;
    }
    if let Some(t) = args.circuit_type {
        cfg.circuit_type = t;
    }
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(s) = args.side {
        cfg.side = s.into();
    }
    if args.no_lone_leaf {
        cfg.lone_leaf = false;
    }
    if let Some(m) = &args.methods {
        cfg.methods = m.clone();
    }
    if let Some(r) = args.repetitions {
        cfg.repetitions = r;
    }
    if let Some(j) = args.jobs {
        cfg.jobs = j;
    }
    if let Some(o) = &args.out {
        cfg.output = Some(o.clone());
    }
    Ok(cfg)
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let cfg = bench_config(&args)?;
    let rows = run_bench(&cfg)?;
    let timing = !args.no_timing;
    match cfg.output.as_deref() {
        Some("-") => write_output("-", &to_csv(&rows, cfg.seed, timing)),
        Some(path) => {
            write_output(path, &to_csv(&rows, cfg.seed, timing))?;
            write_output("-", &to_table(&rows, cfg.seed, timing))
        }
        None => write_output("-", &to_table(&rows, cfg.seed, timing)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Circuit(a) => cmd_circuit(a),
        Command::Route(a) => cmd_route(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
