//! Line-graph qubit routing.
//!
//! A circuit whose coupling graph is a line graph `L(G)` is mapped onto
//! hardware with coupling graph `heavy(G)`: every two-qubit gate between
//! heavy nodes `i` and `j` is realized as `SWAP(m,i) U(m,j) SWAP(i,m)` through
//! their unique common mediator `m`, after which back-to-back SWAPs cancel.

pub mod graph;
pub mod bench;
pub mod circuit;
pub mod lattices;
pub mod qasm;
pub mod router;
pub mod sim;
