use std::process::ExitCode;

use lgr_core::bench::BenchError;
use lgr_core::graph::io::GraphIoError;
use lgr_core::lattices::LatticeError;
use lgr_core::qasm::QasmError;
use lgr_core::router::{ResultJsonError, RouteError};
use lgr_core::sim::SimError;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    NotALineGraph(String),
    #[error("verification failed: min fidelity {fidelity:.3e}, mediator return {ret:.3e}")]
    VerificationFailed { fidelity: f64, ret: f64 },
    #[error("{path}: {source}")]
    Qasm { path: String, source: QasmError },
    #[error("{path}: {source}")]
    GraphFile { path: String, source: GraphIoError },
    #[error("{path}: {source}")]
    ResultFile { path: String, source: ResultJsonError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Route(RouteError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Bench(BenchError),
    #[error("routed hardware graph does not embed into the host graph")]
    NoEmbedding,
    #[error("{0}")]
    Usage(String),
}

impl From<RouteError> for CliError {
    fn from(e: RouteError) -> Self {
        match e {
            RouteError::NotALineGraph(n) => CliError::NotALineGraph(n.to_string()),
            other => CliError::Route(other),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Route(r) => r.into(),
            BenchError::Lattice(l) => CliError::Lattice(l),
            other => CliError::Bench(other),
        }
    }
}

impl CliError {
    /// 0 success, 2 not a line graph, 3 verification failure, 4 unreadable
    /// input, 5 no embedding, 6 other routing or simulation errors, 64 bad
    /// usage, 74 I/O.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::NotALineGraph(_) => 2,
            CliError::VerificationFailed { .. } => 3,
            CliError::Qasm { .. } | CliError::GraphFile { .. } | CliError::ResultFile { .. } => 4,
            CliError::NoEmbedding => 5,
            CliError::Route(_) | CliError::Sim(_) | CliError::Bench(_) => 6,
            CliError::Lattice(_) | CliError::Usage(_) => 64,
            CliError::Io { .. } => 74,
        })
    }
}
