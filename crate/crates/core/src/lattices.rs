//! Deterministic lattice patches: the virtual graphs (kagome, shuriken,
//! checkerboard, complete, random line graphs) and their preimages
//! (hexagonal, square-octagon, square) from which hardware graphs follow via
//! [`heavy_graph`](crate::graph::heavy_graph).
//!
//! Boundary convention ("open, padded"):
//! * `hexagonal(r, c)` is a rhombus of `(r+1) x (c+1)` two-site honeycomb
//!   cells. Site A of cell `(i, j)` bonds to site B of cells `(i, j)`,
//!   `(i-1, j)` and `(i, j-1)`, which leaves two pendant corner sites.
//!   `kagome(r, c)` is its line graph.
//! * `square_octagon(r, c)` places a four-site ring (tips N, E, S, W) in each
//!   of `r x c` cells, joins E to the W tip of the right neighbor and N to the
//!   S tip of the upper neighbor, and gives every tip on the patch boundary a
//!   pendant site. `shuriken(r, c)` is its line graph.
//! * `checkerboard(r, c)` is a `(2r+1) x (2c+1)` grid of sites with
//!   nearest-neighbor bonds and both diagonals in every plaquette whose lower
//!   left corner `(x, y)` has `x + y` even. It is the line graph of a square
//!   lattice patch; `checkerboard(0.5, 0.5)` is `K4`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{complete_graph, line_graph, Graph, NodeId};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LatticeError {
    #[error("patch size must be positive, got {0}")]
    NonPositive(f64),
    #[error("size {0} is not a multiple of 0.5")]
    NotHalfInteger(f64),
    #[error("{family} needs an integer size, got {size}")]
    NotInteger { family: Family, size: f64 },
    #[error("random line graphs need at least 2 preimage nodes, got {0}")]
    TooFewNodes(usize),
    #[error("unknown lattice family {0:?}")]
    UnknownFamily(String),
    #[error("cannot parse size {0:?}, expected RxC (e.g. 3x3, 2.5x2.5) or N")]
    BadSize(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Kagome,
    Shuriken,
    Checkerboard,
    Complete,
    RandomLineGraph,
    Hexagonal,
    Square,
    SquareOctagon,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Kagome,
        Family::Shuriken,
        Family::Checkerboard,
        Family::Complete,
        Family::RandomLineGraph,
        Family::Hexagonal,
        Family::Square,
        Family::SquareOctagon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Kagome => "kagome",
            Family::Shuriken => "shuriken",
            Family::Checkerboard => "checkerboard",
            Family::Complete => "complete",
            Family::RandomLineGraph => "random-line-graph",
            Family::Hexagonal => "hexagonal",
            Family::Square => "square",
            Family::SquareOctagon => "square-octagon",
        }
    }

    /// Families whose size is a node count rather than rows x cols.
    pub fn sized_by_count(self) -> bool {
        matches!(self, Family::Complete | Family::RandomLineGraph)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| LatticeError::UnknownFamily(s.to_string()))
    }
}

/// Patch extent: rows x cols (cells or half-cells), or a node count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Size {
    Grid { rows: f64, cols: f64 },
    Count(usize),
}

impl FromStr for Size {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LatticeError::BadSize(s.to_string());
        match s.split_once(['x', 'X']) {
            Some((r, c)) => Ok(Size::Grid {
                rows: r.trim().parse().map_err(|_| bad())?,
                cols: c.trim().parse().map_err(|_| bad())?,
            }),
            None => s.trim().parse().map(Size::Count).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::Grid { rows, cols } => write!(f, "{rows}x{cols}"),
            Size::Count(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchSpec {
    pub family: Family,
    pub size: Size,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// A generated graph with 2D layout coordinates (for plotting only).
#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    pub graph: Graph,
    pub coords: BTreeMap<NodeId, [f64; 2]>,
}

impl PatchSpec {
    pub fn new(family: Family, size: Size) -> Self {
        Self { family, size, seed: None }
    }

    pub fn generate(&self) -> Result<Patch, LatticeError> {
        let (r, c) = match self.size {
            Size::Grid { rows, cols } => (rows, cols),
            Size::Count(n) => (n as f64, n as f64),
        };
        for x in [r, c] {
            if !(x > 0.0) {
                return Err(LatticeError::NonPositive(x));
            }
        }
        let int = |x: f64| -> Result<usize, LatticeError> {
            if x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(LatticeError::NotInteger { family: self.family, size: x })
            }
        };
        match self.family {
            Family::Kagome => Ok(line_patch(&hexagonal_patch(int(r)?, int(c)?))),
            Family::Hexagonal => Ok(hexagonal_patch(int(r)?, int(c)?)),
            Family::Shuriken => Ok(line_patch(&square_octagon_patch(int(r)?, int(c)?))),
            Family::SquareOctagon => Ok(square_octagon_patch(int(r)?, int(c)?)),
            Family::Checkerboard => checkerboard_patch(r, c),
            Family::Square => Ok(square_patch(int(r)?, int(c)?)),
            Family::Complete => {
                let n = count(self.size)?;
                let graph = complete_graph(n);
                Ok(circle_patch(graph))
            }
            Family::RandomLineGraph => {
                let n = count(self.size)?;
                random_line_graph(n, self.seed.unwrap_or(0)).map(circle_patch)
            }
        }
    }
}

fn count(size: Size) -> Result<usize, LatticeError> {
    match size {
        Size::Count(n) => Ok(n),
        Size::Grid { rows, cols } if rows == cols && rows.fract() == 0.0 => Ok(rows as usize),
        Size::Grid { rows, .. } => Err(LatticeError::BadSize(format!("{size}: use a single count like {}", rows as usize))),
    }
}

fn circle_patch(graph: Graph) -> Patch {
    let n = graph.node_count().max(1) as f64;
    let coords = graph
        .nodes()
        .enumerate()
        .map(|(k, v)| {
            let t = std::f64::consts::TAU * k as f64 / n;
            (v, [t.cos(), t.sin()])
        })
        .collect();
    Patch { graph, coords }
}

/// Line graph of a patch; each node sits at the midpoint of its edge.
fn line_patch(pre: &Patch) -> Patch {
    let lg = line_graph(&pre.graph);
    let coords = lg
        .edge_of
        .iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let (pa, pb) = (pre.coords[a], pre.coords[b]);
            (k as NodeId, [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0])
        })
        .collect();
    Patch { graph: lg.graph, coords }
}

pub fn hexagonal_patch(rows: usize, cols: usize) -> Patch {
    let (n1, n2) = (rows + 1, cols + 1);
    let id = |i: usize, j: usize, s: usize| ((i * n2 + j) * 2 + s) as NodeId;
    let mut g = Graph::new();
    let mut coords = BTreeMap::new();
    let s3 = 3f64.sqrt();
    for i in 0..n1 {
        for j in 0..n2 {
            let base = [i as f64 + 0.5 * j as f64, s3 / 2.0 * j as f64];
            coords.insert(id(i, j, 0), base);
            coords.insert(id(i, j, 1), [base[0] + 0.5, base[1] + s3 / 6.0]);
            g.add_edge(id(i, j, 0), id(i, j, 1)).unwrap();
            if i > 0 {
                g.add_edge(id(i, j, 0), id(i - 1, j, 1)).unwrap();
            }
            if j > 0 {
                g.add_edge(id(i, j, 0), id(i, j - 1, 1)).unwrap();
            }
        }
    }
    Patch { graph: g, coords }
}

pub fn square_octagon_patch(rows: usize, cols: usize) -> Patch {
    // Tips in order N, E, S, W.
    const OFF: [[f64; 2]; 4] = [[0.0, 0.5], [0.5, 0.0], [0.0, -0.5], [-0.5, 0.0]];
    let id = |x: usize, y: usize, t: usize| ((y * cols + x) * 4 + t) as NodeId;
    let mut g = Graph::new();
    let mut coords = BTreeMap::new();
    let mut next = (rows * cols * 4) as NodeId;
    let step = 1.0 + 2f64.sqrt() / 2.0;
    for y in 0..rows {
        for x in 0..cols {
            let c = [x as f64 * step * 1.4, y as f64 * step * 1.4];
            for t in 0..4 {
                coords.insert(id(x, y, t), [c[0] + OFF[t][0], c[1] + OFF[t][1]]);
                g.add_edge(id(x, y, t), id(x, y, (t + 1) % 4)).unwrap();
            }
            let mut pendant = |g: &mut Graph, t: usize| {
                let p = next;
                next += 1;
                g.add_edge(id(x, y, t), p).unwrap();
                coords.insert(p, [c[0] + 2.0 * OFF[t][0], c[1] + 2.0 * OFF[t][1]]);
            };
            if x + 1 < cols {
                g.add_edge(id(x, y, 1), id(x + 1, y, 3)).unwrap();
            } else {
                pendant(&mut g, 1);
            }
            if y + 1 < rows {
                g.add_edge(id(x, y, 0), id(x, y + 1, 2)).unwrap();
            } else {
                pendant(&mut g, 0);
            }
            if x == 0 {
                pendant(&mut g, 3);
            }
            if y == 0 {
                pendant(&mut g, 2);
            }
        }
    }
    Patch { graph: g, coords }
}

/// Sites of a `(2r+1) x (2c+1)` checkerboard, or an error when a size is not
/// a positive multiple of one half.
fn checkerboard_dims(rows: f64, cols: f64) -> Result<(usize, usize), LatticeError> {
    let dim = |m: f64| {
        let twice = 2.0 * m;
        if twice.fract() != 0.0 {
            Err(LatticeError::NotHalfInteger(m))
        } else {
            Ok(twice as usize + 1)
        }
    };
    Ok((dim(rows)?, dim(cols)?))
}

fn checkerboard_patch(rows: f64, cols: f64) -> Result<Patch, LatticeError> {
    let (mr, mc) = checkerboard_dims(rows, cols)?;
    let id = |x: usize, y: usize| (x * mr + y) as NodeId;
    let mut g = Graph::new();
    let mut coords = BTreeMap::new();
    for x in 0..mc {
        for y in 0..mr {
            coords.insert(id(x, y), [x as f64, y as f64]);
            g.add_node(id(x, y));
            if x + 1 < mc {
                g.add_edge(id(x, y), id(x + 1, y)).unwrap();
            }
            if y + 1 < mr {
                g.add_edge(id(x, y), id(x, y + 1)).unwrap();
            }
            if x + 1 < mc && y + 1 < mr && (x + y) % 2 == 0 {
                g.add_edge(id(x, y), id(x + 1, y + 1)).unwrap();
                g.add_edge(id(x + 1, y), id(x, y + 1)).unwrap();
            }
        }
    }
    Ok(Patch { graph: g, coords })
}

/// Plain `rows x cols` grid of sites with nearest-neighbor bonds.
pub fn square_patch(rows: usize, cols: usize) -> Patch {
    let id = |x: usize, y: usize| (y * cols + x) as NodeId;
    let mut g = Graph::new();
    let mut coords = BTreeMap::new();
    for y in 0..rows {
        for x in 0..cols {
            coords.insert(id(x, y), [x as f64, y as f64]);
            g.add_node(id(x, y));
            if x + 1 < cols {
                g.add_edge(id(x, y), id(x + 1, y)).unwrap();
            }
            if y + 1 < rows {
                g.add_edge(id(x, y), id(x, y + 1)).unwrap();
            }
        }
    }
    Patch { graph: g, coords }
}

pub fn hexagonal(rows: usize, cols: usize) -> Graph {
    hexagonal_patch(rows, cols).graph
}

pub fn kagome(rows: usize, cols: usize) -> Graph {
    line_graph(&hexagonal(rows, cols)).graph
}

pub fn square_octagon(rows: usize, cols: usize) -> Graph {
    square_octagon_patch(rows, cols).graph
}

pub fn shuriken(rows: usize, cols: usize) -> Graph {
    line_graph(&square_octagon(rows, cols)).graph
}

/// Checkerboard patch; sizes must be positive multiples of 0.5.
pub fn checkerboard(rows: f64, cols: f64) -> Result<Graph, LatticeError> {
    if !(rows > 0.0) || !(cols > 0.0) {
        return Err(LatticeError::NonPositive(rows.min(cols)));
    }
    checkerboard_patch(rows, cols).map(|p| p.graph)
}

pub fn square(rows: usize, cols: usize) -> Graph {
    square_patch(rows, cols).graph
}

pub fn complete(n: usize) -> Graph {
    complete_graph(n)
}

/// Random connected graph on `n` nodes: each pair is an edge with probability
/// one half, redrawn until connected. The stream is ChaCha8 seeded with
/// `seed`, consuming one `f64` per node pair in lexicographic order per draw.
pub fn random_connected_graph(n: usize, seed: u64) -> Result<Graph, LatticeError> {
    if n < 2 {
        return Err(LatticeError::TooFewNodes(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut g = Graph::new();
        for a in 0..n as NodeId {
            g.add_node(a);
        }
        for a in 0..n as NodeId {
            for b in a + 1..n as NodeId {
                if rng.gen::<f64>() < 0.5 {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        if g.is_connected() {
            return Ok(g);
        }
    }
}

/// Line graph of [`random_connected_graph`]`(n, seed)`.
pub fn random_line_graph(n: usize, seed: u64) -> Result<Graph, LatticeError> {
    Ok(line_graph(&random_connected_graph(n, seed)?).graph)
}
